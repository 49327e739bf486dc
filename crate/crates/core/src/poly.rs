//! H-representation polyhedra over an exact scalar.
//!
//! A [`Polyhedron`] is `{x : A·x ≤ b, E·x = d}`. Construction canonicalizes:
//! zero rows are dropped when trivially true, detected contradictions
//! collapse to a canonical empty marker, equality rows are reduced to row
//! echelon form, inequality rows are scaled so the first nonzero coefficient
//! has absolute value one, and rows are sorted lexicographically. Operations
//! that return polyhedra additionally prune LP-redundant rows, so canonical
//! representations are stable enough for golden tests.

use crate::linalg::{self, dot};
use crate::lp::{solve_lp, LpOutcome, Sense};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// One row `normal·x ≤ offset` (or `= offset` when used as an equality).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Scalar> LinearConstraint<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Self {
        Self { normal, offset }
    }

    fn normalized(mut self) -> Self {
        if let Some(lead) = self.normal.iter().find(|c| !c.is_zero()) {
            let scale = T::one() / lead.abs();
            self.normal = linalg::scale(&scale, &self.normal);
            self.offset = scale * self.offset;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron<T> {
    dim: usize,
    ineqs: Vec<LinearConstraint<T>>,
    eqs: Vec<LinearConstraint<T>>,
}

impl<T: Scalar> Polyhedron<T> {
    /// Builds and canonicalizes a polyhedron from `(normal, offset)` rows.
    pub fn from_rows(
        dim: usize,
        ineqs: Vec<(Vec<T>, T)>,
        eqs: Vec<(Vec<T>, T)>,
    ) -> Result<Self> {
        for (n, _) in ineqs.iter().chain(eqs.iter()) {
            if n.len() != dim {
                return Err(Error::Dimension { expected: dim, got: n.len() });
            }
        }
        let mut p = Self {
            dim,
            ineqs: ineqs.into_iter().map(|(n, o)| LinearConstraint::new(n, o)).collect(),
            eqs: eqs.into_iter().map(|(n, o)| LinearConstraint::new(n, o)).collect(),
        };
        p.canonicalize();
        Ok(p)
    }

    pub fn from_constraints(
        dim: usize,
        ineqs: Vec<LinearConstraint<T>>,
        eqs: Vec<LinearConstraint<T>>,
    ) -> Result<Self> {
        Self::from_rows(
            dim,
            ineqs.into_iter().map(|c| (c.normal, c.offset)).collect(),
            eqs.into_iter().map(|c| (c.normal, c.offset)).collect(),
        )
    }

    /// The whole space `ℝ^dim`.
    pub fn universe(dim: usize) -> Self {
        Self { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    /// Canonical empty polyhedron: the single marker row `0·x ≤ -1`.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            ineqs: vec![LinearConstraint::new(vec![T::zero(); dim], -T::one())],
            eqs: Vec::new(),
        }
    }

    /// Axis-aligned box `lo ≤ x ≤ hi`.
    pub fn box_(lo: &[T], hi: &[T]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::Dimension { expected: lo.len(), got: hi.len() });
        }
        let dim = lo.len();
        let mut ineqs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            ineqs.push((linalg::unit(dim, i), hi[i].clone()));
            ineqs.push((linalg::neg(&linalg::unit(dim, i)), -lo[i].clone()));
        }
        Self::from_rows(dim, ineqs, vec![])
    }

    pub fn halfspace(normal: Vec<T>, offset: T) -> Self {
        let dim = normal.len();
        Self::from_rows(dim, vec![(normal, offset)], vec![]).expect("consistent dims")
    }

    pub fn hyperplane(normal: Vec<T>, offset: T) -> Self {
        let dim = normal.len();
        Self::from_rows(dim, vec![], vec![(normal, offset)]).expect("consistent dims")
    }

    /// The singleton `{point}`.
    pub fn point(point: &[T]) -> Self {
        let eqs = (0..point.len())
            .map(|i| (linalg::unit(point.len(), i), point[i].clone()))
            .collect();
        Self::from_rows(point.len(), vec![], eqs).expect("consistent dims")
    }

    pub fn with_ineq(mut self, normal: Vec<T>, offset: T) -> Result<Self> {
        if normal.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: normal.len() });
        }
        self.ineqs.push(LinearConstraint::new(normal, offset));
        self.canonicalize();
        Ok(self)
    }

    pub fn with_eq(mut self, normal: Vec<T>, offset: T) -> Result<Self> {
        if normal.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: normal.len() });
        }
        self.eqs.push(LinearConstraint::new(normal, offset));
        self.canonicalize();
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[LinearConstraint<T>] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[LinearConstraint<T>] {
        &self.eqs
    }

    fn canonicalize(&mut self) {
        // Equalities: reduced row echelon form of [normal | offset].
        let mut aug: Vec<Vec<T>> = self
            .eqs
            .iter()
            .map(|c| {
                let mut r = c.normal.clone();
                r.push(c.offset.clone());
                r
            })
            .collect();
        let pivots = linalg::rref(&mut aug);
        if pivots.last() == Some(&self.dim) {
            // 0 = nonzero: infeasible.
            *self = Self::empty(self.dim);
            return;
        }
        self.eqs = aug
            .into_iter()
            .map(|mut r| {
                let o = r.pop().expect("augmented column");
                LinearConstraint::new(r, o)
            })
            .collect();

        // Inequalities: drop trivially true zero rows, flag contradictions.
        let mut infeasible = false;
        self.ineqs.retain(|c| {
            if linalg::is_zero(&c.normal) {
                if c.offset < T::zero() {
                    infeasible = true;
                }
                false
            } else {
                true
            }
        });
        if infeasible {
            *self = Self::empty(self.dim);
            return;
        }
        self.ineqs = self.ineqs.drain(..).map(LinearConstraint::normalized).collect();
        self.ineqs.sort();
        self.ineqs.dedup();
        self.eqs.sort();
    }

    /// True when this is the canonical empty marker (cheap, syntactic).
    pub fn is_marked_empty(&self) -> bool {
        self.eqs.is_empty()
            && self.ineqs.len() == 1
            && linalg::is_zero(&self.ineqs[0].normal)
            && self.ineqs[0].offset < T::zero()
    }

    /// Emptiness by LP feasibility.
    pub fn is_empty(&self) -> bool {
        if self.is_marked_empty() {
            return true;
        }
        let zero = vec![T::zero(); self.dim];
        matches!(
            solve_lp(&zero, Sense::Min, self).expect("dimensions agree"),
            LpOutcome::Infeasible { .. }
        )
    }

    /// Some feasible point, when one exists.
    pub fn any_point(&self) -> Option<Vec<T>> {
        let zero = vec![T::zero(); self.dim];
        match solve_lp(&zero, Sense::Min, self).expect("dimensions agree") {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        self.ineqs.iter().all(|c| dot(&c.normal, x) <= c.offset)
            && self.eqs.iter().all(|c| dot(&c.normal, x) == c.offset)
    }

    /// Membership of a direction in the recession cone.
    pub fn contains_direction(&self, v: &[T]) -> bool {
        self.ineqs.iter().all(|c| dot(&c.normal, v) <= T::zero())
            && self.eqs.iter().all(|c| dot(&c.normal, v).is_zero())
    }

    /// Indices of inequality rows active at `x`.
    pub fn active_ineqs(&self, x: &[T]) -> Vec<usize> {
        self.ineqs
            .iter()
            .enumerate()
            .filter(|(_, c)| dot(&c.normal, x) == c.offset)
            .map(|(i, _)| i)
            .collect()
    }

    /// Exact membership in the algebraic interior. In `ℝ^n` the core equals
    /// the topological interior, which is nonempty only for full-dimensional
    /// sets; any surviving canonical equality row therefore rules it out.
    pub fn core_contains(&self, x: &[T]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: x.len() });
        }
        if !self.eqs.is_empty() || self.is_marked_empty() {
            return Ok(false);
        }
        Ok(self.ineqs.iter().all(|c| dot(&c.normal, x) < c.offset))
    }

    /// A strict-interior witness found by maximizing a slack variable;
    /// `None` when the set is empty or not full-dimensional.
    pub fn core_point(&self) -> Option<Vec<T>> {
        if !self.eqs.is_empty() || self.is_marked_empty() {
            return None;
        }
        // max t  s.t.  a·x + t ≤ b for every row, t ≤ 1.
        let n = self.dim;
        let mut rows: Vec<(Vec<T>, T)> = Vec::with_capacity(self.ineqs.len() + 1);
        for c in &self.ineqs {
            let mut normal = c.normal.clone();
            normal.push(T::one());
            rows.push((normal, c.offset.clone()));
        }
        let mut t_cap = vec![T::zero(); n];
        t_cap.push(T::one());
        rows.push((t_cap.clone(), T::one()));
        let lifted = Polyhedron::from_rows(n + 1, rows, vec![]).expect("consistent dims");
        match solve_lp(&t_cap, Sense::Max, &lifted).expect("dimensions agree") {
            LpOutcome::Optimal { value, point } if value > T::zero() => {
                Some(point[..n].to_vec())
            }
            _ => None,
        }
    }

    /// sup of `objective` over the set; `None` marks +∞, `Err` an empty set.
    pub fn maximize(&self, objective: &[T]) -> Result<Option<(T, Vec<T>)>> {
        match solve_lp(objective, Sense::Max, self)? {
            LpOutcome::Optimal { value, point } => Ok(Some((value, point))),
            LpOutcome::Unbounded { .. } => Ok(None),
            LpOutcome::Infeasible { .. } => Err(Error::EmptyInput("maximize")),
        }
    }

    pub fn minimize(&self, objective: &[T]) -> Result<Option<(T, Vec<T>)>> {
        match solve_lp(objective, Sense::Min, self)? {
            LpOutcome::Optimal { value, point } => Ok(Some((value, point))),
            LpOutcome::Unbounded { .. } => Ok(None),
            LpOutcome::Infeasible { .. } => Err(Error::EmptyInput("minimize")),
        }
    }

    /// Intersection (same ambient dimension).
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        Self::from_constraints(self.dim, ineqs, eqs)
    }

    /// Cartesian product: `self × other`.
    pub fn product(&self, other: &Self) -> Self {
        let dim = self.dim + other.dim;
        let pad_left = |c: &LinearConstraint<T>| {
            let mut n = c.normal.clone();
            n.extend(vec![T::zero(); other.dim]);
            LinearConstraint::new(n, c.offset.clone())
        };
        let pad_right = |c: &LinearConstraint<T>| {
            let mut n = vec![T::zero(); self.dim];
            n.extend(c.normal.iter().cloned());
            LinearConstraint::new(n, c.offset.clone())
        };
        let ineqs = self
            .ineqs
            .iter()
            .map(pad_left)
            .chain(other.ineqs.iter().map(pad_right))
            .collect();
        let eqs = self
            .eqs
            .iter()
            .map(pad_left)
            .chain(other.eqs.iter().map(pad_right))
            .collect();
        Self::from_constraints(dim, ineqs, eqs).expect("consistent dims")
    }

    /// The translate `self + t`.
    pub fn translate(&self, t: &[T]) -> Self {
        let shift = |c: &LinearConstraint<T>| {
            LinearConstraint::new(c.normal.clone(), c.offset.clone() + dot(&c.normal, t))
        };
        Self {
            dim: self.dim,
            ineqs: self.ineqs.iter().map(shift).collect(),
            eqs: self.eqs.iter().map(shift).collect(),
        }
    }

    /// The reflection `{−x : x ∈ self}`.
    pub fn reflected(&self) -> Self {
        let flip = |c: &LinearConstraint<T>| {
            LinearConstraint::new(linalg::neg(&c.normal), c.offset.clone())
        };
        let mut out = Self {
            dim: self.dim,
            ineqs: self.ineqs.iter().map(flip).collect(),
            eqs: self.eqs.iter().map(flip).collect(),
        };
        out.canonicalize();
        out
    }

    /// Recession cone `{v : A v ≤ 0, E v = 0}` (as a polyhedron).
    pub fn recession(&self) -> Self {
        let ineqs = self
            .ineqs
            .iter()
            .map(|c| (c.normal.clone(), T::zero()))
            .collect();
        let eqs = self.eqs.iter().map(|c| (c.normal.clone(), T::zero())).collect();
        Self::from_rows(self.dim, ineqs, eqs).expect("consistent dims")
    }

    /// Substitutes fixed values for the listed coordinates, producing a
    /// polyhedron over the remaining coordinates (in ascending order).
    pub fn fix_coords(&self, assignments: &[(usize, T)]) -> Result<Self> {
        let fixed: Vec<usize> = assignments.iter().map(|(i, _)| *i).collect();
        for &i in &fixed {
            if i >= self.dim {
                return Err(Error::Dimension { expected: self.dim, got: i });
            }
        }
        let keep: Vec<usize> = (0..self.dim).filter(|i| !fixed.contains(i)).collect();
        let reduce = |c: &LinearConstraint<T>| {
            let mut offset = c.offset.clone();
            for (i, v) in assignments {
                offset = offset - c.normal[*i].clone() * v.clone();
            }
            let normal = keep.iter().map(|&i| c.normal[i].clone()).collect();
            (normal, offset)
        };
        Self::from_rows(
            keep.len(),
            self.ineqs.iter().map(reduce).collect(),
            self.eqs.iter().map(reduce).collect(),
        )
    }

    /// Exact projection onto the coordinates in `keep` (ascending order),
    /// by Fourier–Motzkin elimination with LP pruning after each step.
    pub fn project(&self, keep: &[usize]) -> Result<Self> {
        for &i in keep {
            if i >= self.dim {
                return Err(Error::Dimension { expected: self.dim, got: i });
            }
        }
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let mut p = self.clone();
        // Eliminate from the highest index down so column indices stay valid.
        for j in (0..self.dim).rev() {
            if !keep_sorted.contains(&j) {
                p = p.eliminate(j);
            }
        }
        Ok(p.pruned())
    }

    /// Eliminates coordinate `j`, reducing the ambient dimension by one.
    fn eliminate(&self, j: usize) -> Self {
        if self.is_marked_empty() {
            return Self::empty(self.dim - 1);
        }
        let drop_col = |normal: &[T]| {
            let mut n = normal.to_vec();
            n.remove(j);
            n
        };
        // Prefer Gaussian substitution through an equality involving x_j.
        if let Some(eq_idx) = self.eqs.iter().position(|c| !c.normal[j].is_zero()) {
            let pivot = &self.eqs[eq_idx];
            let pj = pivot.normal[j].clone();
            let substitute = |c: &LinearConstraint<T>| {
                let f = -(c.normal[j].clone() / pj.clone());
                let normal = linalg::axpy(&c.normal, &f, &pivot.normal);
                let offset = c.offset.clone() + f * pivot.offset.clone();
                (drop_col(&normal), offset)
            };
            let ineqs = self.ineqs.iter().map(substitute).collect();
            let eqs = self
                .eqs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != eq_idx)
                .map(|(_, c)| substitute(c))
                .collect();
            return Self::from_rows(self.dim - 1, ineqs, eqs).expect("consistent dims");
        }
        // Fourier–Motzkin on the inequalities.
        let mut pos = Vec::new();
        let mut negs = Vec::new();
        let mut rows = Vec::new();
        for c in &self.ineqs {
            if c.normal[j] > T::zero() {
                pos.push(c);
            } else if c.normal[j] < T::zero() {
                negs.push(c);
            } else {
                rows.push((drop_col(&c.normal), c.offset.clone()));
            }
        }
        for p in &pos {
            for q in &negs {
                // (-q_j)·p + p_j·q has a zero x_j coefficient; both
                // multipliers are positive so the inequality stays valid.
                let mp = -q.normal[j].clone();
                let mq = p.normal[j].clone();
                let normal = linalg::add(&linalg::scale(&mp, &p.normal), &linalg::scale(&mq, &q.normal));
                let offset = mp * p.offset.clone() + mq * q.offset.clone();
                rows.push((drop_col(&normal), offset));
            }
        }
        let eqs = self
            .eqs
            .iter()
            .map(|c| (drop_col(&c.normal), c.offset.clone()))
            .collect();
        Self::from_rows(self.dim - 1, rows, eqs)
            .expect("consistent dims")
            .pruned()
    }

    /// Removes LP-redundant inequality rows. The result is canonical and
    /// describes the same set.
    pub fn pruned(&self) -> Self {
        if self.is_marked_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return Self::empty(self.dim);
        }
        let mut kept: Vec<LinearConstraint<T>> = self.ineqs.clone();
        let mut i = 0;
        while i < kept.len() {
            let candidate = kept[i].clone();
            let mut rest: Vec<LinearConstraint<T>> = kept.clone();
            rest.remove(i);
            let trial = Self::from_constraints(self.dim, rest.clone(), self.eqs.clone())
                .expect("consistent dims");
            let redundant = match solve_lp(&candidate.normal, Sense::Max, &trial)
                .expect("dimensions agree")
            {
                LpOutcome::Optimal { value, .. } => value <= candidate.offset,
                LpOutcome::Unbounded { .. } => false,
                LpOutcome::Infeasible { .. } => true,
            };
            if redundant {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Self::from_constraints(self.dim, kept, self.eqs.clone()).expect("consistent dims")
    }

    /// `self ⊇ other`, decided by maximizing every facet functional of
    /// `self` over `other`. Equalities of `self` must pin `other` exactly.
    pub fn includes(&self, other: &Self) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        if other.is_empty() {
            return Ok(true);
        }
        if self.is_marked_empty() {
            return Ok(false);
        }
        for c in &self.ineqs {
            match solve_lp(&c.normal, Sense::Max, other)? {
                LpOutcome::Optimal { value, .. } => {
                    if value > c.offset {
                        return Ok(false);
                    }
                }
                LpOutcome::Unbounded { .. } => return Ok(false),
                LpOutcome::Infeasible { .. } => unreachable!("nonempty checked"),
            }
        }
        for c in &self.eqs {
            for sense in [Sense::Max, Sense::Min] {
                match solve_lp(&c.normal, sense, other)? {
                    LpOutcome::Optimal { value, .. } => {
                        if value != c.offset {
                            return Ok(false);
                        }
                    }
                    LpOutcome::Unbounded { .. } => return Ok(false),
                    LpOutcome::Infeasible { .. } => unreachable!("nonempty checked"),
                }
            }
        }
        Ok(true)
    }

    /// Set equality by mutual inclusion (representation independent).
    pub fn set_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.includes(other)? && other.includes(self)?)
    }

    /// Embeds into `ℝ^total`, placing coordinate `i` of `self` at
    /// `positions[i]` and leaving the other coordinates free.
    pub fn embed(&self, total: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.dim || positions.iter().any(|&p| p >= total) {
            return Err(Error::Dimension { expected: self.dim, got: positions.len() });
        }
        let scatter = |c: &LinearConstraint<T>| {
            let mut normal = vec![T::zero(); total];
            for (i, &pos) in positions.iter().enumerate() {
                normal[pos] = c.normal[i].clone();
            }
            (normal, c.offset.clone())
        };
        Self::from_rows(
            total,
            self.ineqs.iter().map(scatter).collect(),
            self.eqs.iter().map(scatter).collect(),
        )
    }

    /// Minkowski sum computed by projecting `{(x, p) : p ∈ self, x − p ∈ other}`.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        let n = self.dim;
        // Coordinates (x, p) ∈ ℝ^{2n}.
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for c in &self.ineqs {
            let mut normal = vec![T::zero(); n];
            normal.extend(c.normal.iter().cloned());
            ineqs.push((normal, c.offset.clone()));
        }
        for c in &self.eqs {
            let mut normal = vec![T::zero(); n];
            normal.extend(c.normal.iter().cloned());
            eqs.push((normal, c.offset.clone()));
        }
        for c in &other.ineqs {
            let mut normal = c.normal.clone();
            normal.extend(linalg::neg(&c.normal));
            ineqs.push((normal, c.offset.clone()));
        }
        for c in &other.eqs {
            let mut normal = c.normal.clone();
            normal.extend(linalg::neg(&c.normal));
            eqs.push((normal, c.offset.clone()));
        }
        let lifted = Self::from_rows(2 * n, ineqs, eqs)?;
        lifted.project(&(0..n).collect::<Vec<_>>())
    }
}

/// Decides `core(core_side) ∩ other ≠ ∅` by a slack LP: maximize `t ≤ 1`
/// subject to `x ∈ other` and `A x + t·1 ≤ b` over the inequality rows of
/// `core_side`. Any surviving equality row of `core_side` empties its core.
pub fn core_meets<T: Scalar>(core_side: &Polyhedron<T>, other: &Polyhedron<T>) -> Result<bool> {
    if core_side.dim() != other.dim() {
        return Err(Error::Dimension { expected: core_side.dim(), got: other.dim() });
    }
    if !core_side.eqs().is_empty() || core_side.is_marked_empty() {
        return Ok(false);
    }
    let n = core_side.dim();
    let mut ineqs: Vec<(Vec<T>, T)> = Vec::new();
    let mut eqs: Vec<(Vec<T>, T)> = Vec::new();
    for c in core_side.ineqs() {
        let mut normal = c.normal.clone();
        normal.push(T::one());
        ineqs.push((normal, c.offset.clone()));
    }
    for c in other.ineqs() {
        let mut normal = c.normal.clone();
        normal.push(T::zero());
        ineqs.push((normal, c.offset.clone()));
    }
    for c in other.eqs() {
        let mut normal = c.normal.clone();
        normal.push(T::zero());
        eqs.push((normal, c.offset.clone()));
    }
    let mut cap = vec![T::zero(); n];
    cap.push(T::one());
    ineqs.push((cap.clone(), T::one()));
    let lifted = Polyhedron::from_rows(n + 1, ineqs, eqs)?;
    Ok(match solve_lp(&cap, Sense::Max, &lifted)? {
        LpOutcome::Optimal { value, .. } => value > T::zero(),
        LpOutcome::Unbounded { .. } => unreachable!("slack is capped"),
        LpOutcome::Infeasible { .. } => false,
    })
}

/// Decides `core(a) ∩ core(b) ≠ ∅`: the slack is strict on both row sets.
pub fn cores_meet<T: Scalar>(a: &Polyhedron<T>, b: &Polyhedron<T>) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: a.dim(), got: b.dim() });
    }
    if !a.eqs().is_empty() || !b.eqs().is_empty() || a.is_marked_empty() || b.is_marked_empty() {
        return Ok(false);
    }
    let n = a.dim();
    let mut ineqs: Vec<(Vec<T>, T)> = Vec::new();
    for c in a.ineqs().iter().chain(b.ineqs()) {
        let mut normal = c.normal.clone();
        normal.push(T::one());
        ineqs.push((normal, c.offset.clone()));
    }
    let mut cap = vec![T::zero(); n];
    cap.push(T::one());
    ineqs.push((cap.clone(), T::one()));
    let lifted = Polyhedron::from_rows(n + 1, ineqs, vec![])?;
    Ok(match solve_lp(&cap, Sense::Max, &lifted)? {
        LpOutcome::Optimal { value, .. } => value > T::zero(),
        LpOutcome::Unbounded { .. } => unreachable!("slack is capped"),
        LpOutcome::Infeasible { .. } => false,
    })
}

/// H-representation of the range of a linear map: `{y : w·y = 0}` over a
/// kernel basis of the adjoint.
pub fn range_subspace<T: Scalar>(map: &crate::linalg::LinearMap<T>) -> Polyhedron<T> {
    let adj_rows = map.adjoint().row_vecs();
    let kernel = linalg::kernel_basis(&adj_rows, map.rows());
    let eqs = kernel.into_iter().map(|w| (w, T::zero())).collect();
    Polyhedron::from_rows(map.rows(), vec![], eqs).expect("consistent dims")
}

/// Proper separation of two nonempty polyhedra: a functional `g` with
/// `sup_P g ≤ inf_Q g` and `inf_P g < sup_Q g`, found by an LP with a
/// strictness slack over the V-representations. Returns `None` when proper
/// separation is impossible.
pub fn separate_properly<T: Scalar>(
    p: &Polyhedron<T>,
    q: &Polyhedron<T>,
) -> Result<Option<(Vec<T>, T)>> {
    if p.dim() != q.dim() {
        return Err(Error::Dimension { expected: p.dim(), got: q.dim() });
    }
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput("separate_properly"));
    }
    let n = p.dim();
    let vp = crate::vrep::vrep(p)?;
    let vq = crate::vrep::vrep(q)?;

    // Work with D = P − Q: proper separation of P, Q is proper separation of
    // D from the origin: sup_D g ≤ 0 with inf_D g < 0.
    let mut points = Vec::new();
    for a in &vp.points {
        for b in &vq.points {
            points.push(linalg::sub(a, b));
        }
    }
    let mut rays: Vec<Vec<T>> = vp.rays.clone();
    rays.extend(vq.rays.iter().map(|r| linalg::neg(r)));
    for l in vp.lineality.iter().chain(vq.lineality.iter()) {
        rays.push(l.clone());
        rays.push(linalg::neg(l));
    }

    // Feasibility rows in (g, ε): g·d ≤ 0 over all of D's generators.
    let mut base_rows: Vec<(Vec<T>, T)> = Vec::new();
    for d in points.iter().chain(rays.iter()) {
        let mut row = d.clone();
        row.push(T::zero());
        base_rows.push((row, T::zero()));
    }
    let mut eps_cap = vec![T::zero(); n];
    eps_cap.push(T::one());
    base_rows.push((eps_cap.clone(), T::one()));

    // Witness candidates for inf_D g < 0: a vertex or a recession generator.
    for w in points.iter().chain(rays.iter()) {
        let mut rows = base_rows.clone();
        let mut wrow = w.clone();
        wrow.push(T::one()); // g·w + ε ≤ 0
        rows.push((wrow, T::zero()));
        let lp = Polyhedron::from_rows(n + 1, rows, vec![])?;
        if let LpOutcome::Optimal { value, point } = solve_lp(&eps_cap, Sense::Max, &lp)? {
            if value > T::zero() {
                let g = point[..n].to_vec();
                let bound = p
                    .maximize(&g)?
                    .map(|(v, _)| v)
                    .expect("sup_P g is finite for a separating g");
                return Ok(Some((g, bound)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn unit_box(n: usize) -> Polyhedron<Q> {
        Polyhedron::box_(&vec![q(0, 1); n], &vec![q(1, 1); n]).unwrap()
    }

    #[test]
    fn canonical_zero_rows() {
        let p = Polyhedron::from_rows(
            2,
            vec![(vec![q(0, 1), q(0, 1)], q(5, 1)), (vec![q(1, 1), q(0, 1)], q(1, 1))],
            vec![],
        )
        .unwrap();
        assert_eq!(p.ineqs().len(), 1);
        let bad = Polyhedron::from_rows(2, vec![(vec![q(0, 1), q(0, 1)], q(-1, 1))], vec![]).unwrap();
        assert!(bad.is_marked_empty());
        assert!(bad.is_empty());
    }

    #[test]
    fn canonical_scaling_and_sorting() {
        let a = Polyhedron::from_rows(
            1,
            vec![(vec![q(2, 1)], q(4, 1)), (vec![q(-3, 1)], q(0, 1))],
            vec![],
        )
        .unwrap();
        let b = Polyhedron::from_rows(
            1,
            vec![(vec![q(-1, 2)], q(0, 1)), (vec![q(5, 1)], q(10, 1))],
            vec![],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn membership_and_core() {
        let p = unit_box(2);
        assert!(p.contains(&[q(1, 2), q(1, 2)]));
        assert!(p.core_contains(&[q(1, 2), q(1, 2)]).unwrap());
        assert!(!p.core_contains(&[q(0, 1), q(1, 2)]).unwrap());
        assert!(!p.contains(&[q(2, 1), q(0, 1)]));
    }

    #[test]
    fn core_of_segment_is_empty() {
        // {x2 = 0, 0 ≤ x1 ≤ 1} in R^2: not full-dimensional.
        let seg = Polyhedron::from_rows(
            2,
            vec![
                (vec![q(1, 1), q(0, 1)], q(1, 1)),
                (vec![q(-1, 1), q(0, 1)], q(0, 1)),
            ],
            vec![(vec![q(0, 1), q(1, 1)], q(0, 1))],
        )
        .unwrap();
        assert!(!seg.core_contains(&[q(1, 2), q(0, 1)]).unwrap());
        assert!(seg.core_point().is_none());
        // Definitional cross-check at (1/2, 0): the direction (0,1) leaves
        // the set for every t ≠ 0.
        let x = [q(1, 2), q(0, 1)];
        let v = [q(0, 1), q(1, 1)];
        let t = q(1, 1000);
        let stepped: Vec<Q> = linalg::axpy(&x, &t, &v);
        assert!(!seg.contains(&stepped));
    }

    #[test]
    fn core_point_of_box() {
        let p = unit_box(2);
        let x = p.core_point().unwrap();
        assert!(p.core_contains(&x).unwrap());
    }

    #[test]
    fn core_point_absent_cases() {
        let hyper = Polyhedron::hyperplane(vec![q(1, 1), q(0, 1)], q(0, 1));
        assert!(hyper.core_point().is_none());
        assert!(Polyhedron::<Q>::empty(2).core_point().is_none());
        // Implicit equality among inequalities.
        let implicit = Polyhedron::from_rows(
            1,
            vec![(vec![q(1, 1)], q(0, 1)), (vec![q(-1, 1)], q(0, 1))],
            vec![],
        )
        .unwrap();
        assert!(implicit.core_point().is_none());
    }

    #[test]
    fn projection_examples() {
        let p = unit_box(2);
        let line = p.project(&[0]).unwrap();
        assert!(line.set_eq(&Polyhedron::box_(&[q(0, 1)], &[q(1, 1)]).unwrap()).unwrap());

        // {x1 + x2 ≤ 1, x2 ≥ 0} onto coordinate 1 → {x1 ≤ 1}.
        let tri = Polyhedron::from_rows(
            2,
            vec![
                (vec![q(1, 1), q(1, 1)], q(1, 1)),
                (vec![q(0, 1), q(-1, 1)], q(0, 1)),
            ],
            vec![],
        )
        .unwrap();
        let proj = tri.project(&[0]).unwrap();
        assert!(proj.set_eq(&Polyhedron::halfspace(vec![q(1, 1)], q(1, 1))).unwrap());

        let empty = Polyhedron::<Q>::empty(2).project(&[0]).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn project_composes() {
        let p = Polyhedron::from_rows(
            3,
            vec![
                (vec![q(1, 1), q(1, 1), q(1, 1)], q(1, 1)),
                (vec![q(-1, 1), q(0, 1), q(0, 1)], q(0, 1)),
                (vec![q(0, 1), q(-1, 1), q(0, 1)], q(0, 1)),
                (vec![q(0, 1), q(0, 1), q(-1, 1)], q(0, 1)),
            ],
            vec![],
        )
        .unwrap();
        let once = p.project(&[0, 1]).unwrap().project(&[0]).unwrap();
        let direct = p.project(&[0]).unwrap();
        assert!(once.set_eq(&direct).unwrap());
    }

    #[test]
    fn equality_with_redundancy() {
        let p = unit_box(2);
        let with_redundant = p.clone().with_ineq(vec![q(1, 1), q(0, 1)], q(2, 1)).unwrap();
        assert!(p.set_eq(&with_redundant).unwrap());
        let taller = Polyhedron::box_(&[q(0, 1), q(0, 1)], &[q(1, 1), q(2, 1)]).unwrap();
        assert!(!p.set_eq(&taller).unwrap());
        assert!(taller.includes(&p).unwrap());
    }

    #[test]
    fn pruning_removes_redundant_rows() {
        let p = unit_box(2).with_ineq(vec![q(1, 1), q(1, 1)], q(5, 1)).unwrap();
        let pruned = p.pruned();
        assert_eq!(pruned, unit_box(2));
    }

    #[test]
    fn minkowski_sum_of_boxes() {
        let a = unit_box(1);
        let b = Polyhedron::box_(&[q(2, 1)], &[q(3, 1)]).unwrap();
        let s = a.minkowski_sum(&b).unwrap();
        assert!(s.set_eq(&Polyhedron::box_(&[q(2, 1)], &[q(4, 1)]).unwrap()).unwrap());
    }

    #[test]
    fn separation_on_disjoint_halflines() {
        // P = {x ≤ 0}, Q = {x ≥ 1} in R.
        let p = Polyhedron::halfspace(vec![q(1, 1)], q(0, 1));
        let hq = Polyhedron::halfspace(vec![q(-1, 1)], q(-1, 1));
        let (g, bound) = separate_properly(&p, &hq).unwrap().unwrap();
        assert!(!linalg::is_zero(&g));
        // sup_P g = bound ≤ inf_Q g, and separation is proper.
        let sup_p = p.maximize(&g).unwrap().unwrap().0;
        assert_eq!(sup_p, bound);
        let inf_q = hq.minimize(&g).unwrap().unwrap().0;
        assert!(sup_p <= inf_q);
    }

    #[test]
    fn no_proper_separation_of_identical_segments() {
        let seg = unit_box(1);
        assert!(separate_properly(&seg, &seg).unwrap().is_none());
    }

    #[test]
    fn separation_of_crossing_segments() {
        // P = [0,1]×{0}, Q = {0}×[0,1]; separable properly at the origin.
        let p = Polyhedron::from_rows(
            2,
            vec![
                (vec![q(1, 1), q(0, 1)], q(1, 1)),
                (vec![q(-1, 1), q(0, 1)], q(0, 1)),
            ],
            vec![(vec![q(0, 1), q(1, 1)], q(0, 1))],
        )
        .unwrap();
        let qq = Polyhedron::from_rows(
            2,
            vec![
                (vec![q(0, 1), q(1, 1)], q(1, 1)),
                (vec![q(0, 1), q(-1, 1)], q(0, 1)),
            ],
            vec![(vec![q(1, 1), q(0, 1)], q(0, 1))],
        )
        .unwrap();
        let (g, _) = separate_properly(&p, &qq).unwrap().unwrap();
        let sup_p = p.maximize(&g).unwrap().unwrap().0;
        let inf_q = qq.minimize(&g).unwrap().unwrap().0;
        assert!(sup_p <= inf_q);
        let inf_p = p.minimize(&g).unwrap().unwrap().0;
        let sup_q = qq.maximize(&g).unwrap().unwrap().0;
        assert!(inf_p < sup_q);
    }

    #[test]
    fn separation_rejects_empty_inputs() {
        let p = unit_box(1);
        let e = Polyhedron::<Q>::empty(1);
        assert_eq!(
            separate_properly(&p, &e),
            Err(Error::EmptyInput("separate_properly"))
        );
    }

    #[test]
    fn fix_coords_slices() {
        let p = unit_box(3);
        let sliced = p.fix_coords(&[(1, q(1, 2))]).unwrap();
        assert!(sliced.set_eq(&unit_box(2)).unwrap());
        let outside = p.fix_coords(&[(1, q(2, 1))]).unwrap();
        assert!(outside.is_empty());
    }
}
