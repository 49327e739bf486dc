//! Cone-constrained convex programs: optimality conditions, multiplier
//! rules, Slater checking, the Lagrange dual and strong duality.
//!
//! Two program classes are supported: componentwise PL constraints ordered
//! by the nonnegative orthant, and affine constraints ordered by a general
//! polyhedral cone. The dual value is computed as one exact LP by dualizing
//! the inner infimum of the Lagrange function, so `sup_h L'(h)` never needs
//! a search over `h`.

use crate::cone::{normal_cone, Cone};
use crate::expr::ConvexExpr;
use crate::linalg::{self, dot, LinearMap};
use crate::lp::{solve_lp, LpOutcome, Sense};
use crate::poly::{LinearConstraint, Polyhedron};
use crate::report::{DualityReport, ExtReal};
use crate::scalar::Scalar;
use crate::subdiff::subdifferential;
use crate::vrep::vrep;
use crate::{Error, Result};

/// The functional constraint `ψ` of a cone program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintMap<T> {
    /// PL convex components `ψ_i`, ordered by `C = ℝ^m_+`.
    Separate(Vec<ConvexExpr<T>>),
    /// Affine `ψ(x) = W x + w0`, ordered by a polyhedral cone `C`.
    Affine { map: LinearMap<T>, offset: Vec<T>, cone: Cone<T> },
}

/// `minimize φ(x) subject to x ∈ Λ, ψ(x) ∈ −C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeProgram<T> {
    pub objective: ConvexExpr<T>,
    pub constraint: ConstraintMap<T>,
    pub base: Polyhedron<T>,
}

impl<T: Scalar> ConeProgram<T> {
    pub fn new(
        objective: ConvexExpr<T>,
        constraint: ConstraintMap<T>,
        base: Polyhedron<T>,
    ) -> Result<Self> {
        let n = objective.dim();
        if base.dim() != n {
            return Err(Error::Dimension { expected: n, got: base.dim() });
        }
        match &constraint {
            ConstraintMap::Separate(psis) => {
                if psis.iter().any(|p| p.dim() != n) {
                    return Err(Error::Dimension { expected: n, got: 0 });
                }
            }
            ConstraintMap::Affine { map, offset, cone } => {
                if map.cols() != n {
                    return Err(Error::Dimension { expected: n, got: map.cols() });
                }
                if offset.len() != map.rows() || cone.dim() != map.rows() {
                    return Err(Error::Dimension { expected: map.rows(), got: offset.len() });
                }
            }
        }
        Ok(Self { objective, constraint, base })
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// Number of constraint components (the dimension of the ordering cone).
    pub fn m(&self) -> usize {
        match &self.constraint {
            ConstraintMap::Separate(psis) => psis.len(),
            ConstraintMap::Affine { map, .. } => map.rows(),
        }
    }

    /// Constraint values `ψ(x)`; `None` when `x` misses some `dom ψ_i`.
    pub fn psi_values(&self, x: &[T]) -> Result<Option<Vec<T>>> {
        match &self.constraint {
            ConstraintMap::Separate(psis) => {
                let mut out = Vec::with_capacity(psis.len());
                for p in psis {
                    match p.eval(x)? {
                        ExtReal::Finite(v) => out.push(v),
                        _ => return Ok(None),
                    }
                }
                Ok(Some(out))
            }
            ConstraintMap::Affine { map, offset, .. } => {
                Ok(Some(linalg::add(&map.apply(x)?, offset)))
            }
        }
    }

    /// The dual cone `C'` as a cheap H-rep (from the generators of `C`).
    pub fn dual_cone_hrep(&self) -> Polyhedron<T> {
        match &self.constraint {
            ConstraintMap::Separate(psis) => Cone::orthant(psis.len()).dual_hrep(),
            ConstraintMap::Affine { cone, .. } => cone.dual_hrep(),
        }
    }

    /// Exact H-rep of the feasible set `Π = {x ∈ Λ : ψ(x) ∈ −C}`.
    pub fn feasible_set(&self) -> Result<Polyhedron<T>> {
        let n = self.dim();
        let mut region = self.base.clone();
        match &self.constraint {
            ConstraintMap::Separate(psis) => {
                for p in psis {
                    let nf = p.normalize();
                    // ψ_i(x) ≤ 0 on dom ψ_i: every piece ≤ 0 plus the domain.
                    let mut rows: Vec<(Vec<T>, T)> = nf
                        .pieces
                        .iter()
                        .map(|(a, b)| (a.clone(), -b.clone()))
                        .collect();
                    rows.extend(
                        nf.domain
                            .ineqs()
                            .iter()
                            .map(|c| (c.normal.clone(), c.offset.clone())),
                    );
                    let eqs = nf
                        .domain
                        .eqs()
                        .iter()
                        .map(|c| (c.normal.clone(), c.offset.clone()))
                        .collect();
                    region = region.intersect(&Polyhedron::from_rows(n, rows, eqs)?)?;
                }
            }
            ConstraintMap::Affine { map, offset, cone } => {
                // −ψ(x) ∈ C through the cone's H-rep rows r·y ≤ 0 / l·y = 0.
                let hrep = cone.hrep();
                let push = |c: &LinearConstraint<T>| {
                    // r·(−W x − w0) ≤ 0  ⇔  (−r W)·x ≤ r·w0.
                    let mut normal = vec![T::zero(); n];
                    for j in 0..n {
                        let mut acc = T::zero();
                        for i in 0..map.rows() {
                            acc = acc - c.normal[i].clone() * map.entry(i, j).clone();
                        }
                        normal[j] = acc;
                    }
                    (normal, dot(&c.normal, offset))
                };
                let rows = hrep.ineqs().iter().map(push).collect();
                let eqs = hrep.eqs().iter().map(push).collect();
                region = region.intersect(&Polyhedron::from_rows(n, rows, eqs)?)?;
            }
        }
        Ok(region.pruned())
    }

    /// Active constraint indices `I(x) = {i : ψ_i(x) = 0}` (componentwise
    /// class only).
    pub fn active_indices(&self, x: &[T]) -> Result<Vec<usize>> {
        let values = self
            .psi_values(x)?
            .ok_or(Error::NotInDomain)?;
        Ok(values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i)
            .collect())
    }
}

/// Fermat-type optimality test for `min φ over Π`: decides
/// `0 ∈ ∂φ(ū) + N(ū; Π)` under one of the two core qualifications.
pub fn optimality_check<T: Scalar>(
    phi: &ConvexExpr<T>,
    feasible: &Polyhedron<T>,
    ubar: &[T],
) -> Result<bool> {
    if !feasible.contains(ubar) {
        return Err(Error::NotInSet);
    }
    let dom = phi.domain();
    if !dom.contains(ubar) {
        return Err(Error::NotInDomain);
    }
    let qualified = crate::poly::core_meets(&dom, feasible)?
        || crate::poly::core_meets(feasible, &dom)?;
    if !qualified {
        return Err(Error::Qualification(
            "neither core(dom φ) ∩ Π nor core(Π) ∩ dom φ is nonempty",
        ));
    }
    let sub = subdifferential(phi, ubar)?.set;
    let cone = normal_cone(feasible, ubar).expect("ubar is in the feasible set");
    zero_in_sum(&[sub], &[], cone.generators())
}

/// Feasibility of `0 ∈ Σ sets + Σ scaled-polytope-blocks + cone(gens)`.
/// Each entry of `blocks` is a list of vrep points whose convex weights are
/// allowed to sum to an arbitrary nonnegative γ (the multiplier); `sets` are
/// fixed polyhedra (weights sum to one implicitly through membership).
fn zero_in_sum<T: Scalar>(
    sets: &[Polyhedron<T>],
    blocks: &[Vec<Vec<T>>],
    cone_gens: &[Vec<T>],
) -> Result<bool> {
    let n = sets
        .first()
        .map(|p| p.dim())
        .or_else(|| blocks.first().map(|b| b[0].len()))
        .unwrap_or_else(|| cone_gens.first().map_or(0, Vec::len));
    // Variables: one point per fixed set (membership rows), block weights,
    // cone coefficients. The sum-to-zero rows tie them together.
    let mut dim = 0;
    let set_starts: Vec<usize> = sets
        .iter()
        .map(|_| {
            let s = dim;
            dim += n;
            s
        })
        .collect();
    let block_starts: Vec<usize> = blocks
        .iter()
        .map(|b| {
            let s = dim;
            dim += b.len();
            s
        })
        .collect();
    let cone_start = dim;
    dim += cone_gens.len();

    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for (set, &start) in sets.iter().zip(&set_starts) {
        for c in set.ineqs() {
            let mut normal = vec![T::zero(); dim];
            normal[start..start + n].clone_from_slice(&c.normal);
            ineqs.push((normal, c.offset.clone()));
        }
        for c in set.eqs() {
            let mut normal = vec![T::zero(); dim];
            normal[start..start + n].clone_from_slice(&c.normal);
            eqs.push((normal, c.offset.clone()));
        }
    }
    for (block, &start) in blocks.iter().zip(&block_starts) {
        for j in 0..block.len() {
            let mut normal = vec![T::zero(); dim];
            normal[start + j] = -T::one();
            ineqs.push((normal, T::zero()));
        }
    }
    for j in 0..cone_gens.len() {
        let mut normal = vec![T::zero(); dim];
        normal[cone_start + j] = -T::one();
        ineqs.push((normal, T::zero()));
    }
    for coord in 0..n {
        let mut normal = vec![T::zero(); dim];
        for &start in &set_starts {
            normal[start + coord] = T::one();
        }
        for (block, &start) in blocks.iter().zip(&block_starts) {
            for (j, p) in block.iter().enumerate() {
                normal[start + j] = p[coord].clone();
            }
        }
        for (j, g) in cone_gens.iter().enumerate() {
            normal[cone_start + j] = g[coord].clone();
        }
        eqs.push((normal, T::zero()));
    }
    Ok(!Polyhedron::from_rows(dim, ineqs, eqs)?.is_empty())
}

/// Fritz-John multipliers `(γ0, …, γm)`, normalized to sum one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FritzJohn<T> {
    pub gamma0: T,
    pub gamma: Vec<T>,
}

fn separate_components<T: Scalar>(prog: &ConeProgram<T>) -> Result<&[ConvexExpr<T>]> {
    match &prog.constraint {
        ConstraintMap::Separate(psis) => Ok(psis),
        ConstraintMap::Affine { .. } => Err(Error::Invalid(
            "multiplier rules need the componentwise (C = orthant) form",
        )),
    }
}

fn check_core_qualification<T: Scalar>(
    prog: &ConeProgram<T>,
    ubar: &[T],
    include_base: bool,
) -> Result<()> {
    let psis = separate_components(prog)?;
    if !prog.objective.domain().core_contains(ubar)? {
        return Err(Error::Qualification("ū is not in core(dom φ)"));
    }
    for p in psis {
        if !p.domain().core_contains(ubar)? {
            return Err(Error::Qualification("ū misses some core(dom ψ_i)"));
        }
    }
    if include_base && !prog.base.contains(ubar) {
        return Err(Error::NotInSet);
    }
    Ok(())
}

/// Subdifferential vertex lists for the multiplier feasibility LPs. Under
/// the core qualifications these sets are polytopes, so the vertex list is
/// the whole story.
fn polytope_vertices<T: Scalar>(set: &Polyhedron<T>) -> Result<Vec<Vec<T>>> {
    let v = vrep(set)?;
    debug_assert!(
        v.rays.is_empty() && v.lineality.is_empty(),
        "subdifferential at a core point is bounded"
    );
    Ok(v.points)
}

/// Fritz-John necessary condition at an LP-certified optimum: nonnegative
/// `(γ0, …, γm)`, not all zero (normalized to sum one), with
/// `0 ∈ γ0 ∂φ(ū) + Σ γ_i ∂ψ_i(ū) + N(ū; Λ)` and `γ_i ψ_i(ū) = 0`.
pub fn fritz_john<T: Scalar>(prog: &ConeProgram<T>, ubar: &[T]) -> Result<FritzJohn<T>> {
    let psis = separate_components(prog)?.to_vec();
    check_core_qualification(prog, ubar, true)?;
    let feasible = prog.feasible_set()?;
    if !feasible.contains(ubar) {
        return Err(Error::NotInSet);
    }
    let (p, _, _) = minimize_over(prog)?;
    if ExtReal::Finite(prog.objective.eval(ubar)?.unwrap_finite()) != p {
        return Err(Error::Invalid("fritz_john requires an optimal point"));
    }

    let active = prog.active_indices(ubar)?;
    let m = psis.len();
    let mut blocks = Vec::new();
    blocks.push(polytope_vertices(&subdifferential(&prog.objective, ubar)?.set)?);
    for &i in &active {
        blocks.push(polytope_vertices(&subdifferential(&psis[i], ubar)?.set)?);
    }
    let cone = normal_cone(&prog.base, ubar).expect("ubar is in Λ");

    // Feasibility LP in the block weights and cone coefficients, with the
    // normalization Σ block-weights = 1 (γ0 + Σ_{i∈I} γ_i = 1).
    let n = prog.dim();
    let mut dim = 0;
    let starts: Vec<usize> = blocks
        .iter()
        .map(|b| {
            let s = dim;
            dim += b.len();
            s
        })
        .collect();
    let cone_start = dim;
    dim += cone.generators().len();
    let mut ineqs = Vec::new();
    for j in 0..dim {
        let mut normal = vec![T::zero(); dim];
        normal[j] = -T::one();
        ineqs.push((normal, T::zero()));
    }
    let mut eqs = Vec::new();
    for coord in 0..n {
        let mut normal = vec![T::zero(); dim];
        for (block, &start) in blocks.iter().zip(&starts) {
            for (j, p) in block.iter().enumerate() {
                normal[start + j] = p[coord].clone();
            }
        }
        for (j, g) in cone.generators().iter().enumerate() {
            normal[cone_start + j] = g[coord].clone();
        }
        eqs.push((normal, T::zero()));
    }
    let mut norm_row = vec![T::zero(); dim];
    for (block, &start) in blocks.iter().zip(&starts) {
        for j in 0..block.len() {
            norm_row[start + j] = T::one();
        }
    }
    eqs.push((norm_row, T::one()));
    let lp = Polyhedron::from_rows(dim, ineqs, eqs)?;
    let Some(point) = lp.any_point() else {
        return Err(Error::Invalid(
            "Fritz-John multipliers missing at a certified optimum",
        ));
    };
    let weight_sum = |start: usize, len: usize| -> T {
        (start..start + len).fold(T::zero(), |acc, j| acc + point[j].clone())
    };
    let gamma0 = weight_sum(starts[0], blocks[0].len());
    let mut gamma = vec![T::zero(); m];
    for (k, &i) in active.iter().enumerate() {
        gamma[i] = weight_sum(starts[k + 1], blocks[k + 1].len());
    }
    Ok(FritzJohn { gamma0, gamma })
}

/// Outcome of [`slater_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slater<T> {
    /// `x̂ ∈ Λ` with `ψ(x̂) ∈ −core(C)`.
    Found(Vec<T>),
    Absent(&'static str),
}

impl<T> Slater<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Slater::Found(_))
    }
}

/// Strict feasibility by slack maximization.
pub fn slater_check<T: Scalar>(prog: &ConeProgram<T>) -> Result<Slater<T>> {
    let n = prog.dim();
    let mut ineqs: Vec<(Vec<T>, T)> = Vec::new();
    let mut eqs: Vec<(Vec<T>, T)> = Vec::new();
    let pad = |c: &LinearConstraint<T>| {
        let mut normal = c.normal.clone();
        normal.push(T::zero());
        (normal, c.offset.clone())
    };
    for c in prog.base.ineqs() {
        ineqs.push(pad(c));
    }
    for c in prog.base.eqs() {
        eqs.push(pad(c));
    }
    match &prog.constraint {
        ConstraintMap::Separate(psis) => {
            for p in psis {
                let nf = p.normalize();
                for (a, b) in &nf.pieces {
                    // a·x + b + t ≤ 0.
                    let mut normal = a.clone();
                    normal.push(T::one());
                    ineqs.push((normal, -b.clone()));
                }
                for c in nf.domain.ineqs() {
                    ineqs.push(pad(c));
                }
                for c in nf.domain.eqs() {
                    eqs.push(pad(c));
                }
            }
        }
        ConstraintMap::Affine { map, offset, cone } => {
            // A polyhedral cone is core-solid iff its generators span the
            // space (the affine hull of a cone is the span of its
            // generators).
            if !cone.is_generating() {
                return Ok(Slater::Absent("core(C) is empty"));
            }
            let hrep = cone.hrep();
            for c in hrep.ineqs() {
                // r·(−ψ(x)) + t ≤ 0  ⇔  (−r W)·x + t ≤ r·w0.
                let mut normal = vec![T::zero(); n + 1];
                for j in 0..n {
                    let mut acc = T::zero();
                    for i in 0..map.rows() {
                        acc = acc - c.normal[i].clone() * map.entry(i, j).clone();
                    }
                    normal[j] = acc;
                }
                normal[n] = T::one();
                ineqs.push((normal, dot(&c.normal, offset)));
            }
        }
    }
    let mut cap = vec![T::zero(); n];
    cap.push(T::one());
    ineqs.push((cap.clone(), T::one()));
    let lifted = Polyhedron::from_rows(n + 1, ineqs, eqs)?;
    match solve_lp(&cap, Sense::Max, &lifted)? {
        LpOutcome::Optimal { value, point } if value > T::zero() => {
            Ok(Slater::Found(point[..n].to_vec()))
        }
        LpOutcome::Optimal { .. } => Ok(Slater::Absent("no strictly feasible point")),
        LpOutcome::Infeasible { .. } => Ok(Slater::Absent("constraint system infeasible")),
        LpOutcome::Unbounded { .. } => unreachable!("slack is capped"),
    }
}

/// KKT verification at a feasible `ū` for given multipliers `γ ≥ 0`:
/// complementary slackness plus `0 ∈ ∂φ(ū) + Σ γ_i ∂ψ_i(ū) + N(ū; Λ)`.
pub fn kkt_check<T: Scalar>(prog: &ConeProgram<T>, ubar: &[T], gamma: &[T]) -> Result<bool> {
    let psis = separate_components(prog)?.to_vec();
    if gamma.len() != psis.len() {
        return Err(Error::Dimension { expected: psis.len(), got: gamma.len() });
    }
    if gamma.iter().any(|g| *g < T::zero()) {
        return Err(Error::Invalid("KKT multipliers must be nonnegative"));
    }
    check_core_qualification(prog, ubar, true)?;
    if !slater_check(prog)?.holds() {
        return Err(Error::Slater);
    }
    let feasible = prog.feasible_set()?;
    if !feasible.contains(ubar) {
        return Err(Error::NotInSet);
    }
    let values = prog.psi_values(ubar)?.expect("qualification puts ū in the domains");
    for (g, v) in gamma.iter().zip(&values) {
        if !(g.clone() * v.clone()).is_zero() {
            return Ok(false);
        }
    }
    let mut sets = vec![subdifferential(&prog.objective, ubar)?.set];
    for (i, p) in psis.iter().enumerate() {
        if !gamma[i].is_zero() {
            sets.push(scale_polyhedron(&subdifferential(p, ubar)?.set, &gamma[i]));
        }
    }
    let cone = normal_cone(&prog.base, ubar).expect("ū ∈ Λ");
    zero_in_sum(&sets, &[], cone.generators())
}

/// Existence direction of the KKT theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KktOutcome<T> {
    Multipliers(Vec<T>),
    /// No multipliers exist; `better` is a feasible point with a strictly
    /// smaller objective, certifying non-optimality.
    NotOptimal { better: Vec<T> },
}

/// Finds KKT multipliers at `ū`, or certifies `ū` non-optimal.
pub fn kkt_find<T: Scalar>(prog: &ConeProgram<T>, ubar: &[T]) -> Result<KktOutcome<T>> {
    let psis = separate_components(prog)?.to_vec();
    check_core_qualification(prog, ubar, true)?;
    if !slater_check(prog)?.holds() {
        return Err(Error::Slater);
    }
    let feasible = prog.feasible_set()?;
    if !feasible.contains(ubar) {
        return Err(Error::NotInSet);
    }
    let active = prog.active_indices(ubar)?;
    let m = psis.len();

    // 0 ∈ ∂φ(ū) (fixed set) + Σ_{i∈I} γ_i ∂ψ_i(ū) (free blocks) + N(ū;Λ).
    let phi_set = subdifferential(&prog.objective, ubar)?.set;
    let mut blocks = Vec::new();
    for &i in &active {
        blocks.push(polytope_vertices(&subdifferential(&psis[i], ubar)?.set)?);
    }
    let cone = normal_cone(&prog.base, ubar).expect("ū ∈ Λ");

    // Rebuild the feasibility system, keeping the block weights so γ can be
    // extracted from a solution point.
    let n = prog.dim();
    let mut dim = n; // the ∂φ member
    let starts: Vec<usize> = blocks
        .iter()
        .map(|b| {
            let s = dim;
            dim += b.len();
            s
        })
        .collect();
    let cone_start = dim;
    dim += cone.generators().len();
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for c in phi_set.ineqs() {
        let mut normal = vec![T::zero(); dim];
        normal[..n].clone_from_slice(&c.normal);
        ineqs.push((normal, c.offset.clone()));
    }
    for c in phi_set.eqs() {
        let mut normal = vec![T::zero(); dim];
        normal[..n].clone_from_slice(&c.normal);
        eqs.push((normal, c.offset.clone()));
    }
    for j in n..dim {
        let mut normal = vec![T::zero(); dim];
        normal[j] = -T::one();
        ineqs.push((normal, T::zero()));
    }
    for coord in 0..n {
        let mut normal = vec![T::zero(); dim];
        normal[coord] = T::one();
        for (block, &start) in blocks.iter().zip(&starts) {
            for (j, p) in block.iter().enumerate() {
                normal[start + j] = p[coord].clone();
            }
        }
        for (j, g) in cone.generators().iter().enumerate() {
            normal[cone_start + j] = g[coord].clone();
        }
        eqs.push((normal, T::zero()));
    }
    let lp = Polyhedron::from_rows(dim, ineqs, eqs)?;
    if let Some(point) = lp.any_point() {
        let mut gamma = vec![T::zero(); m];
        for (k, &i) in active.iter().enumerate() {
            gamma[i] = (starts[k]..starts[k] + blocks[k].len())
                .fold(T::zero(), |acc, j| acc + point[j].clone());
        }
        return Ok(KktOutcome::Multipliers(gamma));
    }
    // Certify non-optimality with a strictly better feasible point.
    let (p, opt, ray) = minimize_over(prog)?;
    let current = prog.objective.eval(ubar)?;
    match (p, opt) {
        (ExtReal::Finite(best), Some(point)) => {
            debug_assert!(ExtReal::Finite(best) < current);
            Ok(KktOutcome::NotOptimal { better: point })
        }
        (ExtReal::NegInf, _) => {
            let (start, dir) = ray.expect("unbounded solve returns a ray");
            let better = improve_along(prog, &start, &dir, &current)?;
            Ok(KktOutcome::NotOptimal { better })
        }
        _ => Err(Error::Invalid("KKT infeasible yet no better point exists")),
    }
}

/// `{c·s : s ∈ set}` for `c > 0`.
fn scale_polyhedron<T: Scalar>(set: &Polyhedron<T>, c: &T) -> Polyhedron<T> {
    let scale = |cons: &LinearConstraint<T>| {
        (cons.normal.clone(), c.clone() * cons.offset.clone())
    };
    Polyhedron::from_rows(
        set.dim(),
        set.ineqs().iter().map(scale).collect(),
        set.eqs().iter().map(scale).collect(),
    )
    .expect("consistent dims")
}

/// Walks `start + k·dir` (doubling `k`) until the objective drops below
/// `threshold`; exact evaluation each step.
fn improve_along<T: Scalar>(
    prog: &ConeProgram<T>,
    start: &[T],
    dir: &[T],
    threshold: &ExtReal<T>,
) -> Result<Vec<T>> {
    let mut k = T::one();
    for _ in 0..128 {
        let cand = linalg::axpy(start, &k, dir);
        let v = prog.objective.eval(&cand)?;
        if v < *threshold {
            return Ok(cand);
        }
        k = k.clone() + k;
    }
    Err(Error::Invalid("improving ray failed to improve"))
}

/// `L(x, h) = φ(x) + ⟨h, ψ(x)⟩`; `PosInf` outside the common domain.
pub fn lagrangian<T: Scalar>(
    prog: &ConeProgram<T>,
    x: &[T],
    h: &[T],
) -> Result<ExtReal<T>> {
    if h.len() != prog.m() {
        return Err(Error::Dimension { expected: prog.m(), got: h.len() });
    }
    let phi = prog.objective.eval(x)?;
    if !phi.is_finite() {
        return Ok(ExtReal::PosInf);
    }
    match prog.psi_values(x)? {
        Some(values) => Ok(phi + ExtReal::Finite(dot(h, &values))),
        None => Ok(ExtReal::PosInf),
    }
}

/// The inner LP data for `inf_{x∈Λ} φ(x) + Σ h_i ψ_i(x)`, shared by the
/// dual-function solve and the joint strong-duality encoding. Coordinates
/// are `(x, t0, t1…tm)` for the componentwise class and `(x, t0)` for the
/// affine class.
struct InnerLp<T> {
    ineqs: Vec<(Vec<T>, T)>,
    eqs: Vec<(Vec<T>, T)>,
    dim: usize,
}

fn inner_lp<T: Scalar>(prog: &ConeProgram<T>) -> InnerLp<T> {
    let n = prog.dim();
    let m = prog.m();
    let (dim, epi_count) = match &prog.constraint {
        ConstraintMap::Separate(_) => (n + 1 + m, m),
        ConstraintMap::Affine { .. } => (n + 1, 0),
    };
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let scatter = |c: &LinearConstraint<T>, t_pos: usize| {
        let mut normal = vec![T::zero(); dim];
        normal[..n].clone_from_slice(&c.normal[..n]);
        normal[t_pos] = c.normal[n].clone();
        (normal, c.offset.clone())
    };
    let epi_phi = prog.objective.epigraph();
    for c in epi_phi.ineqs() {
        ineqs.push(scatter(c, n));
    }
    for c in epi_phi.eqs() {
        eqs.push(scatter(c, n));
    }
    if epi_count > 0 {
        if let ConstraintMap::Separate(psis) = &prog.constraint {
            for (i, p) in psis.iter().enumerate() {
                let epi = p.epigraph();
                for c in epi.ineqs() {
                    ineqs.push(scatter(c, n + 1 + i));
                }
                for c in epi.eqs() {
                    eqs.push(scatter(c, n + 1 + i));
                }
            }
        }
    }
    let pad = |c: &LinearConstraint<T>| {
        let mut normal = vec![T::zero(); dim];
        normal[..n].clone_from_slice(&c.normal);
        (normal, c.offset.clone())
    };
    for c in prog.base.ineqs() {
        ineqs.push(pad(c));
    }
    for c in prog.base.eqs() {
        eqs.push(pad(c));
    }
    InnerLp { ineqs, eqs, dim }
}

/// The Lagrange dual function `L'(h) = inf_{x∈Λ} φ(x) + ⟨h, ψ(x)⟩` for
/// `h ∈ C'` (checked).
pub fn dual_function<T: Scalar>(prog: &ConeProgram<T>, h: &[T]) -> Result<ExtReal<T>> {
    if h.len() != prog.m() {
        return Err(Error::Dimension { expected: prog.m(), got: h.len() });
    }
    if !prog.dual_cone_hrep().contains(h) {
        return Err(Error::NotInDualCone);
    }
    let inner = inner_lp(prog);
    let n = prog.dim();
    let mut objective = vec![T::zero(); inner.dim];
    objective[n] = T::one();
    let mut constant = T::zero();
    match &prog.constraint {
        ConstraintMap::Separate(_) => {
            for i in 0..prog.m() {
                objective[n + 1 + i] = h[i].clone();
            }
        }
        ConstraintMap::Affine { map, offset, .. } => {
            let wh = map.adjoint().apply(h)?;
            for (j, v) in wh.into_iter().enumerate() {
                objective[j] = v;
            }
            constant = dot(h, offset);
        }
    }
    let region = Polyhedron::from_rows(inner.dim, inner.ineqs, inner.eqs)?;
    Ok(match solve_lp(&objective, Sense::Min, &region)? {
        LpOutcome::Optimal { value, .. } => ExtReal::Finite(value + constant),
        LpOutcome::Unbounded { .. } => ExtReal::NegInf,
        LpOutcome::Infeasible { .. } => ExtReal::PosInf,
    })
}

/// Exact primal minimum of φ over the feasible set, with optimizer or ray.
#[allow(clippy::type_complexity)]
fn minimize_over<T: Scalar>(
    prog: &ConeProgram<T>,
) -> Result<(ExtReal<T>, Option<Vec<T>>, Option<(Vec<T>, Vec<T>)>)> {
    let n = prog.dim();
    let feasible = prog.feasible_set()?;
    let lifted = prog
        .objective
        .epigraph()
        .intersect(&feasible.product(&Polyhedron::universe(1)))?;
    let mut obj = vec![T::zero(); n];
    obj.push(T::one());
    Ok(match solve_lp(&obj, Sense::Min, &lifted)? {
        LpOutcome::Optimal { value, point } => {
            (ExtReal::Finite(value), Some(point[..n].to_vec()), None)
        }
        LpOutcome::Unbounded { point, ray } => (
            ExtReal::NegInf,
            None,
            Some((point[..n].to_vec(), ray[..n].to_vec())),
        ),
        LpOutcome::Infeasible { .. } => (ExtReal::PosInf, None, None),
    })
}

/// `sup_{h ∈ C'} L'(h)` as one LP, by dualizing the inner infimum: the
/// program searches `(h, y, z, θ)` with `y ≥ 0` dual-feasible for the inner
/// LP at cost row `c(h)` and maximizes the certified lower bound `θ`.
fn dual_value_lp<T: Scalar>(
    prog: &ConeProgram<T>,
) -> Result<(ExtReal<T>, Option<Vec<T>>)> {
    let inner = inner_lp(prog);
    let n = prog.dim();
    let m = prog.m();
    let n_y = inner.ineqs.len();
    let n_z = inner.eqs.len();
    // Variables (h, y, z, θ).
    let dim = m + n_y + n_z + 1;
    let h0 = 0;
    let y0 = m;
    let z0 = m + n_y;
    let th = dim - 1;

    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    // Stationarity: Gᵀy + Hᵀz + c(h) = 0 per inner coordinate.
    for k in 0..inner.dim {
        let mut normal = vec![T::zero(); dim];
        for (r, (g, _)) in inner.ineqs.iter().enumerate() {
            normal[y0 + r] = g[k].clone();
        }
        for (s, (e, _)) in inner.eqs.iter().enumerate() {
            normal[z0 + s] = e[k].clone();
        }
        let mut rhs = T::zero();
        match &prog.constraint {
            ConstraintMap::Separate(_) => {
                if k == n {
                    rhs = -T::one();
                } else if k > n {
                    normal[h0 + (k - n - 1)] = T::one();
                }
            }
            ConstraintMap::Affine { map, .. } => {
                if k == n {
                    rhs = -T::one();
                } else {
                    // c_k(h) = (Wᵀh)_k.
                    for i in 0..m {
                        normal[h0 + i] = map.entry(i, k).clone();
                    }
                }
            }
        }
        eqs.push((normal, rhs));
    }
    // Bound row: θ ≤ −g·y − e·z (+ h·w0 in the affine class).
    {
        let mut normal = vec![T::zero(); dim];
        for (r, (_, g)) in inner.ineqs.iter().enumerate() {
            normal[y0 + r] = g.clone();
        }
        for (s, (_, e)) in inner.eqs.iter().enumerate() {
            normal[z0 + s] = e.clone();
        }
        normal[th] = T::one();
        if let ConstraintMap::Affine { offset, .. } = &prog.constraint {
            for i in 0..m {
                normal[h0 + i] = -offset[i].clone();
            }
        }
        ineqs.push((normal, T::zero()));
    }
    // y ≥ 0.
    for r in 0..n_y {
        let mut normal = vec![T::zero(); dim];
        normal[y0 + r] = -T::one();
        ineqs.push((normal, T::zero()));
    }
    // h ∈ C'.
    let dual_cone = prog.dual_cone_hrep();
    for c in dual_cone.ineqs() {
        let mut normal = vec![T::zero(); dim];
        normal[h0..h0 + m].clone_from_slice(&c.normal);
        ineqs.push((normal, c.offset.clone()));
    }
    for c in dual_cone.eqs() {
        let mut normal = vec![T::zero(); dim];
        normal[h0..h0 + m].clone_from_slice(&c.normal);
        eqs.push((normal, c.offset.clone()));
    }

    let mut objective = vec![T::zero(); dim];
    objective[th] = T::one();
    let region = Polyhedron::from_rows(dim, ineqs, eqs)?;
    Ok(match solve_lp(&objective, Sense::Max, &region)? {
        LpOutcome::Optimal { value, point } => {
            (ExtReal::Finite(value), Some(point[h0..h0 + m].to_vec()))
        }
        LpOutcome::Unbounded { .. } => (ExtReal::PosInf, None),
        LpOutcome::Infeasible { .. } => (ExtReal::NegInf, None),
    })
}

/// Primal and dual solves plus Slater bookkeeping.
pub fn strong_duality_report<T: Scalar>(prog: &ConeProgram<T>) -> Result<DualityReport<T>> {
    let (primal_value, primal_opt, _) = minimize_over(prog)?;
    let (dual_value, dual_opt) = dual_value_lp(prog)?;
    let slater = slater_check(prog)?;
    let qualified = slater.holds();
    let gap = match (&primal_value, &dual_value) {
        (ExtReal::Finite(p), ExtReal::Finite(d)) => Some(p.clone() - d.clone()),
        _ => None,
    };
    let attained = dual_value.is_finite() && dual_opt.is_some();
    let report = DualityReport {
        primal_value,
        dual_value,
        gap,
        primal_opt,
        dual_opt,
        qualifications: vec![("Slater", qualified)],
        qualified,
        slater: Some(qualified),
        attained,
    };
    debug_assert!(report.weak_duality_holds());
    Ok(report)
}

/// Solvability of the strict primal system (IP) `{φ(x) < 0, ψ(x) ∈ −C,
/// x ∈ Λ}` and the dual system (ID) `{h ∈ C' : L(x,h) ≥ 0 ∀x ∈ Λ}`, with
/// witnesses. Under Slater exactly one is solvable; they are never both
/// solvable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternativeSystems<T> {
    pub ip_solvable: bool,
    pub ip_witness: Option<Vec<T>>,
    pub id_solvable: bool,
    pub id_witness: Option<Vec<T>>,
    pub slater: bool,
}

pub fn alternative_systems<T: Scalar>(prog: &ConeProgram<T>) -> Result<AlternativeSystems<T>> {
    // (IP) is solvable iff inf φ over Π < 0.
    let (p, opt, ray) = minimize_over(prog)?;
    let (ip_solvable, ip_witness) = match (&p, opt, ray) {
        (ExtReal::Finite(v), Some(point), _) if *v < T::zero() => (true, Some(point)),
        (ExtReal::NegInf, _, Some((start, dir))) => {
            let w = improve_along(prog, &start, &dir, &ExtReal::zero())?;
            (true, Some(w))
        }
        _ => (false, None),
    };
    // (ID) is solvable iff sup_h L'(h) ≥ 0.
    let (d, h) = dual_value_lp(prog)?;
    let (id_solvable, id_witness) = match (&d, h) {
        (ExtReal::Finite(v), Some(h)) if *v >= T::zero() => (true, Some(h)),
        (ExtReal::PosInf, _) => {
            // Any certified bound θ ≥ 0 works; re-solve for a witness by
            // intersecting with θ ≥ 0 and minimizing zero.
            (true, id_witness_for_unbounded(prog)?)
        }
        _ => (false, None),
    };
    let slater = slater_check(prog)?.holds();
    Ok(AlternativeSystems { ip_solvable, ip_witness, id_solvable, id_witness, slater })
}

fn id_witness_for_unbounded<T: Scalar>(prog: &ConeProgram<T>) -> Result<Option<Vec<T>>> {
    // Pick any h in C' whose dual function is ≥ 0 by scanning the dual cone
    // generators scaled by LP; cheap fallback: binary search is unnecessary
    // because the dual value LP being unbounded means the inner problem is
    // infeasible, so every h ∈ C' has L'(h) = +∞ ≥ 0.
    let m = prog.m();
    Ok(Some(vec![T::zero(); m]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn affine1(c: i64, b: i64) -> ConvexExpr<Q> {
        ConvexExpr::affine(vec![q(c, 1)], q(b, 1))
    }

    /// |x − 2| as a max-affine.
    fn abs_shift2() -> ConvexExpr<Q> {
        ConvexExpr::max_affine(vec![(vec![q(1, 1)], q(-2, 1)), (vec![q(-1, 1)], q(2, 1))])
            .unwrap()
    }

    fn simple_prog() -> ConeProgram<Q> {
        // minimize |x − 2| s.t. x − 1 ≤ 0, x ∈ ℝ.
        ConeProgram::new(
            abs_shift2(),
            ConstraintMap::Separate(vec![affine1(1, -1)]),
            Polyhedron::universe(1),
        )
        .unwrap()
    }

    #[test]
    fn feasible_sets() {
        // Λ = ℝ, ψ1 = x − 1 → {x ≤ 1}.
        let p = simple_prog().feasible_set().unwrap();
        assert!(p.set_eq(&Polyhedron::halfspace(vec![q(1, 1)], q(1, 1))).unwrap());

        // Λ = [0,3], ψ1 = |x| − 2 → [0,2].
        let prog = ConeProgram::new(
            ConvexExpr::zero(1),
            ConstraintMap::Separate(vec![ConvexExpr::sum(
                ConvexExpr::abs1(),
                ConvexExpr::constant(1, q(-2, 1)),
            )
            .unwrap()]),
            Polyhedron::box_(&[q(0, 1)], &[q(3, 1)]).unwrap(),
        )
        .unwrap();
        let p = prog.feasible_set().unwrap();
        assert!(p.set_eq(&Polyhedron::box_(&[q(0, 1)], &[q(2, 1)]).unwrap()).unwrap());

        // Affine ψ = (x1, x2), C = ℝ²₊ → {x ≤ 0}.
        let prog = ConeProgram::new(
            ConvexExpr::zero(2),
            ConstraintMap::Affine {
                map: LinearMap::identity(2),
                offset: vec![q(0, 1), q(0, 1)],
                cone: Cone::orthant(2),
            },
            Polyhedron::universe(2),
        )
        .unwrap();
        let p = prog.feasible_set().unwrap();
        let expected = Polyhedron::from_rows(
            2,
            vec![
                (vec![q(1, 1), q(0, 1)], q(0, 1)),
                (vec![q(0, 1), q(1, 1)], q(0, 1)),
            ],
            vec![],
        )
        .unwrap();
        assert!(p.set_eq(&expected).unwrap());
    }

    #[test]
    fn optimality_check_examples() {
        // φ = |x−2|, Π = (−∞, 1]: optimal at 1, not at 0.
        let pi = Polyhedron::halfspace(vec![q(1, 1)], q(1, 1));
        assert!(optimality_check(&abs_shift2(), &pi, &[q(1, 1)]).unwrap());
        assert!(!optimality_check(&abs_shift2(), &pi, &[q(0, 1)]).unwrap());
        // φ = |x|, Π = [−1,1], optimum at 0.
        let pi = Polyhedron::box_(&[q(-1, 1)], &[q(1, 1)]).unwrap();
        assert!(optimality_check(&ConvexExpr::abs1(), &pi, &[q(0, 1)]).unwrap());
    }

    #[test]
    fn fritz_john_balanced_multipliers() {
        // φ = x, ψ1 = −x, Λ = ℝ, ū = 0: (γ0, γ1) ∝ (1, 1).
        let prog = ConeProgram::new(
            affine1(1, 0),
            ConstraintMap::Separate(vec![affine1(-1, 0)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        let fj = fritz_john(&prog, &[q(0, 1)]).unwrap();
        assert_eq!(fj.gamma0, q(1, 2));
        assert_eq!(fj.gamma, vec![q(1, 2)]);
    }

    #[test]
    fn fritz_john_at_boundary_optimum() {
        let fj = fritz_john(&simple_prog(), &[q(1, 1)]).unwrap();
        // 0 = γ0·(−1) + γ1·(1): equal weights after normalization.
        assert_eq!(fj.gamma0, q(1, 2));
        assert_eq!(fj.gamma, vec![q(1, 2)]);
    }

    #[test]
    fn fritz_john_degenerate_no_slater() {
        // ψ = (x, −x) pins Π = {0}; φ = x is minimized there but no Slater.
        // γ0 = 0 is admissible here (e.g. (0,1,1) before normalization); the
        // LP may also balance with γ0 > 0. Validate the defining relations:
        // 0 = γ0·1 + γ1·1 + γ2·(−1), weights normalized.
        let prog = ConeProgram::new(
            affine1(1, 0),
            ConstraintMap::Separate(vec![affine1(1, 0), affine1(-1, 0)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        let fj = fritz_john(&prog, &[q(0, 1)]).unwrap();
        let combo = fj.gamma0.clone() + fj.gamma[0].clone() - fj.gamma[1].clone();
        assert_eq!(combo, q(0, 1));
        let total = fj.gamma0.clone() + fj.gamma.iter().fold(q(0, 1), |a, g| a + g.clone());
        assert_eq!(total, q(1, 1));
        // Complementary slackness holds trivially: ψ_i(0) = 0.
    }

    #[test]
    fn slater_examples() {
        assert!(matches!(slater_check(&simple_prog()).unwrap(), Slater::Found(_)));

        let no_slater = ConeProgram::new(
            affine1(1, 0),
            ConstraintMap::Separate(vec![affine1(1, 0), affine1(-1, 0)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        assert!(!slater_check(&no_slater).unwrap().holds());

        // Affine ψ = (x1, x2) into a ray cone: core(C) = ∅.
        let ray_cone = Cone::from_generators(2, vec![vec![q(1, 1), q(0, 1)]]).unwrap();
        let prog = ConeProgram::new(
            ConvexExpr::zero(2),
            ConstraintMap::Affine {
                map: LinearMap::identity(2),
                offset: vec![q(0, 1), q(0, 1)],
                cone: ray_cone,
            },
            Polyhedron::universe(2),
        )
        .unwrap();
        assert_eq!(slater_check(&prog).unwrap(), Slater::Absent("core(C) is empty"));
    }

    #[test]
    fn kkt_check_examples() {
        let prog = simple_prog();
        assert!(kkt_check(&prog, &[q(1, 1)], &[q(1, 1)]).unwrap());
        assert!(!kkt_check(&prog, &[q(1, 1)], &[q(0, 1)]).unwrap());
        // Interior optimum with inactive constraint: φ = |x|, ψ1 = x − 1.
        let prog2 = ConeProgram::new(
            ConvexExpr::abs1(),
            ConstraintMap::Separate(vec![affine1(1, -1)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        assert!(kkt_check(&prog2, &[q(0, 1)], &[q(0, 1)]).unwrap());
        // γ1 > 0 violates complementary slackness at the interior optimum.
        assert!(!kkt_check(&prog2, &[q(0, 1)], &[q(1, 1)]).unwrap());
    }

    #[test]
    fn kkt_find_and_improvement() {
        let prog = simple_prog();
        match kkt_find(&prog, &[q(1, 1)]).unwrap() {
            KktOutcome::Multipliers(g) => assert_eq!(g, vec![q(1, 1)]),
            other => panic!("expected multipliers, got {other:?}"),
        }
        match kkt_find(&prog, &[q(0, 1)]).unwrap() {
            KktOutcome::NotOptimal { better } => {
                let worse = prog.objective.eval(&[q(0, 1)]).unwrap();
                let improved = prog.objective.eval(&better).unwrap();
                assert!(improved < worse);
                assert!(prog.feasible_set().unwrap().contains(&better));
            }
            other => panic!("expected non-optimality certificate, got {other:?}"),
        }
    }

    #[test]
    fn kkt_find_two_active_constraints() {
        // φ = |x1−2| + |x2−2|, ψ = (x1−1, x2−1): optimum (1,1), γ = (1,1).
        let phi = ConvexExpr::sum(
            ConvexExpr::max_affine(vec![
                (vec![q(1, 1), q(0, 1)], q(-2, 1)),
                (vec![q(-1, 1), q(0, 1)], q(2, 1)),
            ])
            .unwrap(),
            ConvexExpr::max_affine(vec![
                (vec![q(0, 1), q(1, 1)], q(-2, 1)),
                (vec![q(0, 1), q(-1, 1)], q(2, 1)),
            ])
            .unwrap(),
        )
        .unwrap();
        let prog = ConeProgram::new(
            phi,
            ConstraintMap::Separate(vec![
                ConvexExpr::affine(vec![q(1, 1), q(0, 1)], q(-1, 1)),
                ConvexExpr::affine(vec![q(0, 1), q(1, 1)], q(-1, 1)),
            ]),
            Polyhedron::universe(2),
        )
        .unwrap();
        match kkt_find(&prog, &[q(1, 1), q(1, 1)]).unwrap() {
            KktOutcome::Multipliers(g) => assert_eq!(g, vec![q(1, 1), q(1, 1)]),
            other => panic!("expected multipliers, got {other:?}"),
        }
    }

    #[test]
    fn lagrangian_values() {
        let prog = ConeProgram::new(
            ConvexExpr::abs1(),
            ConstraintMap::Separate(vec![affine1(1, -1)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        assert_eq!(
            lagrangian(&prog, &[q(0, 1)], &[q(2, 1)]).unwrap(),
            ExtReal::Finite(q(-2, 1))
        );
        assert_eq!(
            lagrangian(&prog, &[q(0, 1)], &[q(0, 1)]).unwrap(),
            ExtReal::zero()
        );
        assert_eq!(
            lagrangian(&prog, &[q(1, 1)], &[q(7, 1)]).unwrap(),
            ExtReal::Finite(q(1, 1))
        );
    }

    #[test]
    fn dual_function_values() {
        // φ = |x−2|, ψ1 = x−1, Λ = ℝ: L'(1) = 1.
        let prog = simple_prog();
        assert_eq!(dual_function(&prog, &[q(1, 1)]).unwrap(), ExtReal::Finite(q(1, 1)));
        // h = 0 reduces to inf φ = 0.
        assert_eq!(dual_function(&prog, &[q(0, 1)]).unwrap(), ExtReal::zero());
        // φ = x, ψ1 = −x, h = 0 → −∞.
        let unbounded = ConeProgram::new(
            affine1(1, 0),
            ConstraintMap::Separate(vec![affine1(-1, 0)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        assert_eq!(dual_function(&unbounded, &[q(0, 1)]).unwrap(), ExtReal::NegInf);
        // Negative h is rejected.
        assert_eq!(dual_function(&prog, &[q(-1, 1)]), Err(Error::NotInDualCone));
    }

    #[test]
    fn strong_duality_qualified() {
        let r = strong_duality_report(&simple_prog()).unwrap();
        assert_eq!(r.primal_value, ExtReal::Finite(q(1, 1)));
        assert_eq!(r.dual_value, ExtReal::Finite(q(1, 1)));
        assert_eq!(r.slater, Some(true));
        assert!(r.attained);
        // The attaining h certifies its value through the dual function.
        let h = r.dual_opt.unwrap();
        assert_eq!(dual_function(&simple_prog(), &h).unwrap(), r.dual_value);
    }

    #[test]
    fn strong_duality_no_slater_weak_only() {
        let prog = ConeProgram::new(
            affine1(1, 0),
            ConstraintMap::Separate(vec![affine1(1, 0), affine1(-1, 0)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        let r = strong_duality_report(&prog).unwrap();
        assert_eq!(r.slater, Some(false));
        assert!(r.weak_duality_holds());
        assert_eq!(r.primal_value, ExtReal::zero());
    }

    #[test]
    fn strong_duality_unbounded_primal() {
        // p = −∞ (min x over x ≤ 1) forces d = −∞.
        let prog = ConeProgram::new(
            affine1(1, 0),
            ConstraintMap::Separate(vec![affine1(1, -1)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        let r = strong_duality_report(&prog).unwrap();
        assert_eq!(r.primal_value, ExtReal::NegInf);
        assert_eq!(r.dual_value, ExtReal::NegInf);
    }

    #[test]
    fn strong_duality_affine_cone_class() {
        // minimize x1 + x2 s.t. ψ(x) = (x1 − 1, x2 − 1) ∈ −C, C = ℝ²₊,
        // Λ = [−5,5]²: optimum −10 at (−5,−5).
        let prog = ConeProgram::new(
            ConvexExpr::affine(vec![q(1, 1), q(1, 1)], q(0, 1)),
            ConstraintMap::Affine {
                map: LinearMap::identity(2),
                offset: vec![q(-1, 1), q(-1, 1)],
                cone: Cone::orthant(2),
            },
            Polyhedron::box_(&[q(-5, 1), q(-5, 1)], &[q(5, 1), q(5, 1)]).unwrap(),
        )
        .unwrap();
        let r = strong_duality_report(&prog).unwrap();
        assert_eq!(r.primal_value, ExtReal::Finite(q(-10, 1)));
        assert!(r.zero_gap());
        assert_eq!(r.slater, Some(true));
    }

    #[test]
    fn alternative_systems_examples() {
        // φ = |x| − 1: IP solvable (x = 0), ID unsolvable.
        let prog = ConeProgram::new(
            ConvexExpr::sum(ConvexExpr::abs1(), ConvexExpr::constant(1, q(-1, 1))).unwrap(),
            ConstraintMap::Separate(vec![affine1(1, -1)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        let alt = alternative_systems(&prog).unwrap();
        assert!(alt.slater);
        assert!(alt.ip_solvable && !alt.id_solvable);
        let w = alt.ip_witness.unwrap();
        assert!(prog.objective.eval(&w).unwrap() < ExtReal::zero());
        assert!(prog.feasible_set().unwrap().contains(&w));

        // φ = |x| + 1: IP unsolvable, ID solvable with h = 0.
        let prog = ConeProgram::new(
            ConvexExpr::sum(ConvexExpr::abs1(), ConvexExpr::constant(1, q(1, 1))).unwrap(),
            ConstraintMap::Separate(vec![affine1(1, -1)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        let alt = alternative_systems(&prog).unwrap();
        assert!(!alt.ip_solvable && alt.id_solvable);
        let h = alt.id_witness.unwrap();
        assert!(dual_function(&prog, &h).unwrap() >= ExtReal::zero());

        // No Slater: only the exclusion direction (never both solvable).
        let prog = ConeProgram::new(
            affine1(1, 0),
            ConstraintMap::Separate(vec![affine1(1, 0), affine1(-1, 0)]),
            Polyhedron::universe(1),
        )
        .unwrap();
        let alt = alternative_systems(&prog).unwrap();
        assert!(!alt.slater);
        assert!(!(alt.ip_solvable && alt.id_solvable));
    }

    #[test]
    fn weak_duality_spot_checks() {
        let prog = simple_prog();
        let feas = prog.feasible_set().unwrap();
        for xi in [-3, -1, 0, 1] {
            let x = [q(xi, 1)];
            if !feas.contains(&x) {
                continue;
            }
            for hi in [0, 1, 2, 5] {
                let h = [q(hi, 1)];
                let lhs = prog.objective.eval(&x).unwrap();
                let rhs = dual_function(&prog, &h).unwrap();
                assert!(lhs >= rhs);
            }
        }
    }
}
