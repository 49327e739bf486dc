//! Exact two-phase simplex over an ordered field, with Bland's rule.
//!
//! Every separation, qualification and duality check in the crate reduces to
//! instances of [`solve_lp`]. The tableau is dense and keeps one artificial
//! column per row, so the phase-1 duals (and hence Farkas certificates) can
//! be read off directly. Bland's pivoting rule guarantees termination; no
//! tolerances appear anywhere.

use crate::linalg::{self, dot};
use crate::poly::Polyhedron;
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Certificate of infeasibility for `{A x ≤ b, E x = d}`:
/// `yᵀA + zᵀE = 0`, `y ≥ 0`, and `yᵀb + zᵀd < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Farkas<T> {
    pub ineq_mult: Vec<T>,
    pub eq_mult: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    /// `point` is feasible and `ray` is a recession direction improving the
    /// objective strictly.
    Unbounded { point: Vec<T>, ray: Vec<T> },
    Infeasible { farkas: Farkas<T> },
}

impl<T: Scalar> LpOutcome<T> {
    pub fn optimal(self) -> Option<(T, Vec<T>)> {
        match self {
            LpOutcome::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }
}

enum Step {
    Optimal,
    Unbounded { entering: usize },
}

/// Dense tableau; columns are `u | v | slack | artificial | rhs` where the
/// original free variables are `x = u - v`.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    n: usize,
    n_slack: usize,
    width: usize, // column count excluding rhs
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, r: usize) -> &T {
        &self.rows[r][self.width]
    }

    fn art_start(&self) -> usize {
        2 * self.n + self.n_slack
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = T::one() / self.rows[row][col].clone();
        self.rows[row] = linalg::scale(&inv, &self.rows[row]);
        for r in 0..self.rows.len() {
            if r != row && !self.rows[r][col].is_zero() {
                let f = -self.rows[r][col].clone();
                self.rows[r] = linalg::axpy(&self.rows[r], &f, &self.rows[row]);
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex for `min cost·vars` from the current basis. `allowed`
    /// limits the entering columns. Bland's rule throughout.
    fn run(&mut self, cost: &[T], allowed: &dyn Fn(usize) -> bool) -> Step {
        // Reduced costs r = c - c_B B^{-1} A, maintained from scratch each
        // iteration; the tableaus here are small and exactness trumps speed.
        loop {
            let mut reduced: Vec<T> = cost.to_vec();
            for (r, &b) in self.basis.iter().enumerate() {
                if !cost[b].is_zero() {
                    let f = cost[b].clone();
                    for j in 0..self.width {
                        let t = f.clone() * self.rows[r][j].clone();
                        reduced[j] = reduced[j].clone() - t;
                    }
                }
            }
            let entering = (0..self.width)
                .find(|&j| allowed(j) && reduced[j] < T::zero() && !self.basis.contains(&j));
            let Some(col) = entering else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col] > T::zero() {
                    let ratio = self.rhs(r).clone() / self.rows[r][col].clone();
                    let better = match &leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return Step::Unbounded { entering: col },
            }
        }
    }

    /// Value of structural variable `j` (column index) in the basic solution.
    fn var_value(&self, j: usize) -> T {
        self.basis
            .iter()
            .position(|&b| b == j)
            .map(|r| self.rhs(r).clone())
            .unwrap_or_else(T::zero)
    }

    fn point(&self) -> Vec<T> {
        (0..self.n)
            .map(|i| self.var_value(i) - self.var_value(self.n + i))
            .collect()
    }
}

/// Solves `sense objective·x` over the polyhedron `p` exactly.
pub fn solve_lp<T: Scalar>(
    objective: &[T],
    sense: Sense,
    p: &Polyhedron<T>,
) -> Result<LpOutcome<T>> {
    let n = p.dim();
    if objective.len() != n {
        return Err(Error::Dimension { expected: n, got: objective.len() });
    }
    let minimize: Vec<T> = match sense {
        Sense::Min => objective.to_vec(),
        Sense::Max => linalg::neg(objective),
    };

    let n_ineq = p.ineqs().len();
    let n_rows = n_ineq + p.eqs().len();
    let n_slack = n_ineq;
    let width = 2 * n + n_slack + n_rows;

    // Row signs are normalized so every rhs is nonnegative and each row gets
    // an artificial variable; the artificial block is the identity, which is
    // what lets us read B^{-1} (and the phase-1 duals) back out.
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n_rows);
    let mut flipped = Vec::with_capacity(n_rows);
    let all = p.ineqs().iter().chain(p.eqs().iter());
    for (r, c) in all.enumerate() {
        let flip = c.offset < T::zero();
        flipped.push(flip);
        let sgn = if flip { -T::one() } else { T::one() };
        let mut row = vec![T::zero(); width + 1];
        for (j, a) in c.normal.iter().enumerate() {
            row[j] = sgn.clone() * a.clone();
            row[n + j] = -(sgn.clone() * a.clone());
        }
        if r < n_ineq {
            row[2 * n + r] = sgn.clone();
        }
        row[2 * n + n_slack + r] = T::one();
        row[width] = sgn * c.offset.clone();
        rows.push(row);
    }

    let mut tab = Tableau { rows, basis: (0..n_rows).map(|r| 2 * n + n_slack + r).collect(), n, n_slack, width };

    // Phase 1: minimize the artificial sum.
    let mut phase1 = vec![T::zero(); width];
    for j in tab.art_start()..width {
        phase1[j] = T::one();
    }
    match tab.run(&phase1, &|_| true) {
        Step::Optimal => {}
        Step::Unbounded { .. } => unreachable!("phase-1 objective is bounded below by zero"),
    }
    let art_sum: T = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= tab.art_start())
        .fold(T::zero(), |acc, (r, _)| acc + tab.rhs(r).clone());
    if art_sum > T::zero() {
        // Phase-1 dual y = c_B B^{-1}; the artificial block holds B^{-1}.
        let art0 = tab.art_start();
        let mut y = Vec::with_capacity(n_rows);
        for r0 in 0..n_rows {
            let mut yr = T::zero();
            for (r, &b) in tab.basis.iter().enumerate() {
                if b >= art0 {
                    yr = yr + tab.rows[r][art0 + r0].clone();
                }
            }
            if flipped[r0] {
                yr = -yr;
            }
            // The sign-normalized dual satisfies y'·rows = 0 with y'_r ≤ 0 on
            // slack rows; negate to land in the standard Farkas orientation.
            y.push(-yr);
        }
        let farkas = Farkas { ineq_mult: y[..n_ineq].to_vec(), eq_mult: y[n_ineq..].to_vec() };
        debug_assert!(check_farkas(&farkas, p));
        return Ok(LpOutcome::Infeasible { farkas });
    }

    // Drive leftover artificials out of the basis where possible; a row that
    // cannot pivot is linearly dependent and stays harmlessly at zero.
    let art0 = tab.art_start();
    for r in 0..n_rows {
        if tab.basis[r] >= art0 {
            if let Some(col) = (0..art0).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, col);
            }
        }
    }

    // Phase 2.
    let mut phase2 = vec![T::zero(); width];
    for j in 0..n {
        phase2[j] = minimize[j].clone();
        phase2[n + j] = -minimize[j].clone();
    }
    let art_banned = move |j: usize| j < art0;
    match tab.run(&phase2, &art_banned) {
        Step::Optimal => {
            let point = tab.point();
            let value = dot(objective, &point);
            Ok(LpOutcome::Optimal { value, point })
        }
        Step::Unbounded { entering } => {
            let point = tab.point();
            let mut dir = vec![T::zero(); width];
            dir[entering] = T::one();
            for (r, &b) in tab.basis.iter().enumerate() {
                dir[b] = -tab.rows[r][entering].clone();
            }
            let ray: Vec<T> = (0..n).map(|i| dir[i].clone() - dir[n + i].clone()).collect();
            Ok(LpOutcome::Unbounded { point, ray })
        }
    }
}

/// Validates a Farkas certificate against the polyhedron it refutes.
pub fn check_farkas<T: Scalar>(f: &Farkas<T>, p: &Polyhedron<T>) -> bool {
    if f.ineq_mult.len() != p.ineqs().len() || f.eq_mult.len() != p.eqs().len() {
        return false;
    }
    if f.ineq_mult.iter().any(|y| *y < T::zero()) {
        return false;
    }
    let mut combo = vec![T::zero(); p.dim()];
    let mut rhs = T::zero();
    for (y, c) in f.ineq_mult.iter().zip(p.ineqs()) {
        combo = linalg::axpy(&combo, y, &c.normal);
        rhs = rhs + y.clone() * c.offset.clone();
    }
    for (z, c) in f.eq_mult.iter().zip(p.eqs()) {
        combo = linalg::axpy(&combo, z, &c.normal);
        rhs = rhs + z.clone() * c.offset.clone();
    }
    linalg::is_zero(&combo) && rhs < T::zero()
}

/// Builds the LP dual of `sense objective·x over p` as another explicit LP:
/// for `min cᵀx s.t. Ax ≤ b, Ex = d` the dual is
/// `max −bᵀy − dᵀz s.t. Aᵀy + Eᵀz = −c, y ≥ 0`.
///
/// Used by the kernel self-checks: primal and dual optima must coincide on
/// every feasible bounded instance.
pub fn dual_of<T: Scalar>(
    objective: &[T],
    sense: Sense,
    p: &Polyhedron<T>,
) -> (Vec<T>, Sense, Polyhedron<T>) {
    let c: Vec<T> = match sense {
        Sense::Min => objective.to_vec(),
        Sense::Max => linalg::neg(objective),
    };
    let my = p.ineqs().len();
    let mz = p.eqs().len();
    let n = p.dim();
    let dual_dim = my + mz;
    let mut ineqs = Vec::new();
    for i in 0..my {
        let mut row = vec![T::zero(); dual_dim];
        row[i] = -T::one();
        ineqs.push((row, T::zero()));
    }
    let mut eqs = Vec::new();
    for j in 0..n {
        let mut row = Vec::with_capacity(dual_dim);
        for c in p.ineqs() {
            row.push(c.normal[j].clone());
        }
        for c in p.eqs() {
            row.push(c.normal[j].clone());
        }
        eqs.push((row, -c[j].clone()));
    }
    let mut obj = Vec::with_capacity(dual_dim);
    for c in p.ineqs() {
        obj.push(-c.offset.clone());
    }
    for c in p.eqs() {
        obj.push(-c.offset.clone());
    }
    if sense == Sense::Max {
        obj = linalg::neg(&obj);
    }
    let dual_sense = match sense {
        Sense::Min => Sense::Max,
        Sense::Max => Sense::Min,
    };
    let dual_poly = Polyhedron::from_rows(dual_dim, ineqs, eqs).expect("consistent dual rows");
    (obj, dual_sense, dual_poly)
}
