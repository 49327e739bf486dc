//! Fenchel conjugates, support functions and the conjugate calculus rules
//! with attainment witnesses.
//!
//! The exact conjugate of a PL function is read off the V-representation of
//! its epigraph: each minimal face contributes the affine piece
//! `s ↦ s·x_v − t_v` and the recession generators cut out `dom f*`. Witness
//! computations (intersection splits, sum rule, chain rule) realize the
//! constructive separation proofs as single exact LPs over dual multipliers.

use crate::expr::{ConvexExpr, NormalForm};
use crate::linalg::{self, LinearMap};
use crate::lp::{solve_lp, LpOutcome, Sense};
use crate::poly::{core_meets, range_subspace, Polyhedron};
use crate::report::ExtReal;
use crate::scalar::Scalar;
use crate::vrep::vrep;
use crate::{Error, Result};

/// Attainment witness for a two-term conjugate identity: functionals
/// `f₁ + f₂ = f` with the theorem's value split. `qualified` records whether
/// the core qualification backing the attainment theorem held; on polyhedral
/// data the LP produces the split regardless.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateWitness<T> {
    pub parts: (Vec<T>, Vec<T>),
    pub values: (T, T),
    pub qualified: bool,
}

impl<T: Scalar> ConjugateWitness<T> {
    pub fn total(&self) -> T {
        self.values.0.clone() + self.values.1.clone()
    }
}

/// `σ_P(f) = sup_{u ∈ P} f·u`; `PosInf` when unbounded, error on empty `P`.
pub fn support_function<T: Scalar>(p: &Polyhedron<T>, f: &[T]) -> Result<ExtReal<T>> {
    if f.len() != p.dim() {
        return Err(Error::Dimension { expected: p.dim(), got: f.len() });
    }
    match solve_lp(f, Sense::Max, p)? {
        LpOutcome::Optimal { value, .. } => Ok(ExtReal::Finite(value)),
        LpOutcome::Unbounded { .. } => Ok(ExtReal::PosInf),
        LpOutcome::Infeasible { .. } => Err(Error::EmptyInput("support_function")),
    }
}

/// Splits `f` as `f₁ + f₂` with
/// `σ_{P₁∩P₂}(f) = σ_{P₁}(f₁) + σ_{P₂}(f₂)`, under the qualification
/// `core(P₁) ∩ P₂ ≠ ∅`. The split comes from one LP over the dual
/// multipliers of both constraint systems.
pub fn support_intersection_split<T: Scalar>(
    p1: &Polyhedron<T>,
    p2: &Polyhedron<T>,
    f: &[T],
) -> Result<ConjugateWitness<T>> {
    if f.len() != p1.dim() || p1.dim() != p2.dim() {
        return Err(Error::Dimension { expected: p1.dim(), got: f.len() });
    }
    let qualified = core_meets(p1, p2)? || core_meets(p2, p1)?;
    let n = p1.dim();
    let m1 = p1.ineqs().len();
    let k1 = p1.eqs().len();
    let m2 = p2.ineqs().len();
    let k2 = p2.eqs().len();
    let total = m1 + k1 + m2 + k2;

    // Variables w = (y1, z1, y2, z2); minimize (b1,d1,b2,d2)·w subject to
    // A1ᵀy1 + E1ᵀz1 + A2ᵀy2 + E2ᵀz2 = f and y ≥ 0. By LP duality the optimum
    // is σ_{P1∩P2}(f), and the two halves of the objective evaluate the
    // separate support functions at the recovered split.
    let mut ineqs = Vec::new();
    for (block, len) in [(0, m1), (m1 + k1, m2)] {
        for j in 0..len {
            let mut row = vec![T::zero(); total];
            row[block + j] = -T::one();
            ineqs.push((row, T::zero()));
        }
    }
    let mut eqs = Vec::new();
    for c in 0..n {
        let mut row = Vec::with_capacity(total);
        for cons in p1.ineqs().iter().chain(p1.eqs().iter()) {
            row.push(cons.normal[c].clone());
        }
        for cons in p2.ineqs().iter().chain(p2.eqs().iter()) {
            row.push(cons.normal[c].clone());
        }
        eqs.push((row, f[c].clone()));
    }
    let mut objective = Vec::with_capacity(total);
    for cons in p1.ineqs().iter().chain(p1.eqs().iter()) {
        objective.push(cons.offset.clone());
    }
    for cons in p2.ineqs().iter().chain(p2.eqs().iter()) {
        objective.push(cons.offset.clone());
    }
    let feasible = Polyhedron::from_rows(total, ineqs, eqs)?;
    let w = match solve_lp(&objective, Sense::Min, &feasible)? {
        LpOutcome::Optimal { point, .. } => point,
        // Dual infeasible: f is outside dom σ_{P1∩P2} (or the intersection
        // itself is empty).
        LpOutcome::Infeasible { .. } => {
            return if p1.intersect(p2)?.is_empty() {
                Err(Error::EmptyInput("support_intersection_split"))
            } else {
                Err(Error::Unbounded)
            }
        }
        LpOutcome::Unbounded { .. } => {
            return Err(Error::EmptyInput("support_intersection_split"))
        }
    };
    let mut f1 = vec![T::zero(); n];
    let mut v1 = T::zero();
    for (j, cons) in p1.ineqs().iter().chain(p1.eqs().iter()).enumerate() {
        f1 = linalg::axpy(&f1, &w[j], &cons.normal);
        v1 = v1 + w[j].clone() * cons.offset.clone();
    }
    let f2 = linalg::sub(f, &f1);
    let mut v2 = T::zero();
    for (j, cons) in p2.ineqs().iter().chain(p2.eqs().iter()).enumerate() {
        v2 = v2 + w[m1 + k1 + j].clone() * cons.offset.clone();
    }
    debug_assert_eq!(support_function(p1, &f1)?, ExtReal::Finite(v1.clone()));
    debug_assert_eq!(support_function(p2, &f2)?, ExtReal::Finite(v2.clone()));
    Ok(ConjugateWitness { parts: (f1, f2), values: (v1, v2), qualified })
}

/// The exact PL conjugate, assembled from the epigraph V-representation.
pub fn conjugate<T: Scalar>(f: &ConvexExpr<T>) -> Result<ConvexExpr<T>> {
    let n = f.dim();
    let epi = f.epigraph();
    let v = vrep(&epi)?;
    debug_assert!(!v.points.is_empty(), "proper function has a nonempty epigraph");
    let pieces: Vec<(Vec<T>, T)> = v
        .points
        .iter()
        .map(|p| (p[..n].to_vec(), -p[n].clone()))
        .collect();
    // dom f* = {s : (s,−1)·(u,w) ≤ 0 for every recession generator (u,w)}.
    let mut ineqs = Vec::new();
    for r in &v.rays {
        ineqs.push((r[..n].to_vec(), r[n].clone()));
    }
    let mut eqs = Vec::new();
    for l in &v.lineality {
        eqs.push((l[..n].to_vec(), l[n].clone()));
    }
    let dom = Polyhedron::from_rows(n, ineqs, eqs)?.pruned();
    Ok(NormalForm::from_parts(n, pieces, dom).to_expr())
}

/// `σ_{epi f}(s, −1)`, the epigraph route to the conjugate value.
pub fn conjugate_via_epigraph<T: Scalar>(f: &ConvexExpr<T>, s: &[T]) -> Result<ExtReal<T>> {
    let mut dir = s.to_vec();
    dir.push(-T::one());
    support_function(&f.epigraph(), &dir)
}

/// Conjugate sum rule with witness: under
/// `core(dom φ₁) ∩ dom φ₂ ≠ ∅`, returns `(f₁, f₂)` with `f₁ + f₂ = f` and
/// `(φ₁+φ₂)*(f) = φ₁*(f₁) + φ₂*(f₂)`.
pub fn conjugate_sum_split<T: Scalar>(
    phi1: &ConvexExpr<T>,
    phi2: &ConvexExpr<T>,
    f: &[T],
) -> Result<ConjugateWitness<T>> {
    let n = phi1.dim();
    if phi2.dim() != n || f.len() != n {
        return Err(Error::Dimension { expected: n, got: f.len() });
    }
    if !core_meets(&phi1.domain(), &phi2.domain())? {
        return Err(Error::Qualification("core(dom φ1) ∩ dom φ2 = ∅"));
    }
    // Λ1 = epi(φ1) × ℝ and Λ2 = {(z, γ1, γ2) : γ2 ≥ φ2(z)} in ℝ^{n+2};
    // (φ1+φ2)*(f) = σ_{Λ1∩Λ2}(f, −1, −1) and the intersection split of that
    // support functional is exactly the sum-rule witness.
    let lam1 = phi1.epigraph().product(&Polyhedron::universe(1));
    let positions: Vec<usize> = (0..n).chain([n + 1]).collect();
    let lam2 = phi2.epigraph().embed(n + 2, &positions)?;
    let mut functional = f.to_vec();
    functional.push(-T::one());
    functional.push(-T::one());
    let split = support_intersection_split(&lam1, &lam2, &functional)?;
    let (g1, g2) = split.parts;
    debug_assert_eq!(g1[n + 1], T::zero());
    debug_assert_eq!(g2[n], T::zero());
    Ok(ConjugateWitness {
        parts: (g1[..n].to_vec(), g2[..n].to_vec()),
        values: split.values,
        qualified: true,
    })
}

/// Conjugate chain rule with witness: under `AX ∩ core(dom φ) ≠ ∅`, returns
/// `s` with `A*s = f` and `(φ∘A)*(f) = φ*(s)`.
pub fn conjugate_chain_witness<T: Scalar>(
    phi: &ConvexExpr<T>,
    a: &LinearMap<T>,
    f: &[T],
) -> Result<(Vec<T>, T)> {
    let m = phi.dim();
    let n = a.cols();
    if a.rows() != m || f.len() != n {
        return Err(Error::Dimension { expected: n, got: f.len() });
    }
    if !core_meets(&phi.domain(), &range_subspace(a))? {
        return Err(Error::Qualification("AX ∩ core(dom φ) = ∅"));
    }
    // minimize r over {(s, r) ∈ epi(φ*), A*s = f}.
    let epi_conj = conjugate(phi)?.epigraph();
    let adjoint_rows: Vec<(Vec<T>, T)> = (0..n)
        .map(|j| {
            let mut row: Vec<T> = (0..m).map(|i| a.entry(i, j).clone()).collect();
            row.push(T::zero());
            (row, f[j].clone())
        })
        .collect();
    let feasible = epi_conj.intersect(&Polyhedron::from_rows(m + 1, vec![], adjoint_rows)?)?;
    let mut objective = vec![T::zero(); m];
    objective.push(T::one());
    match solve_lp(&objective, Sense::Min, &feasible)? {
        LpOutcome::Optimal { value, point } => Ok((point[..m].to_vec(), value)),
        LpOutcome::Infeasible { .. } => {
            // Distinguish an empty preimage of the adjoint from f outside
            // the conjugate's domain.
            let preimage = Polyhedron::from_rows(
                m,
                vec![],
                (0..n)
                    .map(|j| {
                        let row: Vec<T> = (0..m).map(|i| a.entry(i, j).clone()).collect();
                        (row, f[j].clone())
                    })
                    .collect(),
            )?;
            if preimage.is_empty() {
                Err(Error::NoPreimage)
            } else {
                Err(Error::Unbounded)
            }
        }
        LpOutcome::Unbounded { .. } => {
            Err(Error::Invalid("chain witness unbounded under qualification"))
        }
    }
}

/// Exact infimal convolution `(φ₁ □ φ₂)(x) = inf_u φ₁(u) + φ₂(x − u)`,
/// computed by projecting the lifted sum epigraph. Errors with
/// [`Error::Improper`] when the result is unbounded below somewhere.
pub fn inf_convolution<T: Scalar>(
    phi1: &ConvexExpr<T>,
    phi2: &ConvexExpr<T>,
) -> Result<ConvexExpr<T>> {
    let n = phi1.dim();
    if phi2.dim() != n {
        return Err(Error::Dimension { expected: n, got: phi2.dim() });
    }
    // Coordinates (x, t, u, r): (u, r) ∈ epi φ1 and (x − u, t − r) ∈ epi φ2.
    let total = 2 * n + 2;
    let epi1 = phi1.epigraph();
    let positions1: Vec<usize> = (n + 1..2 * n + 1).chain([2 * n + 1]).collect();
    let lifted1 = epi1.embed(total, &positions1)?;
    let epi2 = phi2.epigraph();
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let spread = |c: &crate::poly::LinearConstraint<T>| {
        let mut normal = vec![T::zero(); total];
        for i in 0..n {
            normal[i] = c.normal[i].clone();
            normal[n + 1 + i] = -c.normal[i].clone();
        }
        normal[n] = c.normal[n].clone();
        normal[2 * n + 1] = -c.normal[n].clone();
        (normal, c.offset.clone())
    };
    for c in epi2.ineqs() {
        ineqs.push(spread(c));
    }
    for c in epi2.eqs() {
        eqs.push(spread(c));
    }
    let lifted2 = Polyhedron::from_rows(total, ineqs, eqs)?;
    let epi = lifted1
        .intersect(&lifted2)?
        .project(&(0..=n).collect::<Vec<_>>())?;
    epi_to_expr(&epi)
}

/// Reads a PL function back off an epigraph-shaped polyhedron in
/// `ℝ^{n+1}` (last coordinate the epigraph variable).
pub fn epi_to_expr<T: Scalar>(epi: &Polyhedron<T>) -> Result<ConvexExpr<T>> {
    let n = epi
        .dim()
        .checked_sub(1)
        .ok_or(Error::Invalid("epigraph needs at least one coordinate"))?;
    if epi.is_empty() {
        return Err(Error::Improper("empty epigraph"));
    }
    let mut up = vec![T::zero(); n];
    up.push(T::one());
    if !epi.contains_direction(&up) {
        return Err(Error::Invalid("not an epigraph: misses the upward recession"));
    }
    let down = linalg::neg(&up);
    if epi.contains_direction(&down) {
        return Err(Error::Improper("value unbounded below"));
    }
    let mut pieces = Vec::new();
    let mut dom_ineqs = Vec::new();
    for c in epi.ineqs() {
        let w = c.normal[n].clone();
        if w.is_zero() {
            dom_ineqs.push((c.normal[..n].to_vec(), c.offset.clone()));
        } else {
            // Upward recession forces w < 0; scale to t ≥ slope·x + intercept.
            let scale = T::one() / -w;
            let slope = linalg::scale(&scale, &c.normal[..n]);
            let intercept = -(scale * c.offset.clone());
            pieces.push((slope, intercept));
        }
    }
    let dom_eqs = epi
        .eqs()
        .iter()
        .map(|c| {
            debug_assert!(c.normal[n].is_zero(), "upward recession forces level equalities");
            (c.normal[..n].to_vec(), c.offset.clone())
        })
        .collect();
    let dom = Polyhedron::from_rows(n, dom_ineqs, dom_eqs)?.pruned();
    Ok(NormalForm::from_parts(n, pieces, dom).to_expr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;
    use num_traits::Signed;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn seg(a: i64, b: i64) -> Polyhedron<Q> {
        Polyhedron::box_(&[q(a, 1)], &[q(b, 1)]).unwrap()
    }

    fn abs() -> ConvexExpr<Q> {
        ConvexExpr::abs1()
    }

    fn exprs_equal(a: &ConvexExpr<Q>, b: &ConvexExpr<Q>) -> bool {
        a.epigraph().set_eq(&b.epigraph()).unwrap()
    }

    #[test]
    fn support_examples() {
        let box2 = Polyhedron::box_(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(
            support_function(&box2, &[q(1, 1), q(1, 1)]).unwrap(),
            ExtReal::Finite(q(2, 1))
        );
        let ray = Polyhedron::halfspace(vec![q(-1, 1)], q(0, 1));
        assert_eq!(support_function(&ray, &[q(1, 1)]).unwrap(), ExtReal::PosInf);
        let origin = Polyhedron::point(&[q(0, 1), q(0, 1)]);
        assert_eq!(
            support_function(&origin, &[q(7, 1), q(-3, 1)]).unwrap(),
            ExtReal::zero()
        );
        assert!(support_function(&Polyhedron::<Q>::empty(1), &[q(1, 1)]).is_err());
    }

    #[test]
    fn intersection_split_overlapping_segments() {
        let w = support_intersection_split(&seg(0, 2), &seg(1, 3), &[q(1, 1)]).unwrap();
        assert_eq!(w.parts.0[0].clone() + w.parts.1[0].clone(), q(1, 1));
        // σ_{[1,2]}(1) = 2, matched by the split values.
        assert_eq!(w.total(), q(2, 1));
    }

    #[test]
    fn intersection_split_identical_segments_at_zero() {
        let w = support_intersection_split(&seg(0, 1), &seg(0, 1), &[q(0, 1)]).unwrap();
        assert_eq!(w.total(), q(0, 1));
        assert_eq!(w.parts.0[0].clone() + w.parts.1[0].clone(), q(0, 1));
    }

    #[test]
    fn intersection_split_opposing_halflines() {
        // Touching halflines: no core qualification, but the LP still
        // produces a valid split with σ_{P1∩P2}(1) = 0.
        let p1 = Polyhedron::halfspace(vec![q(1, 1)], q(0, 1));
        let p2 = Polyhedron::halfspace(vec![q(-1, 1)], q(0, 1));
        let w = support_intersection_split(&p1, &p2, &[q(1, 1)]).unwrap();
        assert_eq!(w.total(), q(0, 1));
        assert!(!w.qualified);
    }

    #[test]
    fn intersection_split_reports_qualification() {
        let w = support_intersection_split(&seg(0, 2), &seg(1, 3), &[q(1, 1)]).unwrap();
        assert!(w.qualified);
        let w2 = support_intersection_split(&seg(0, 1), &seg(1, 2), &[q(1, 1)]).unwrap();
        assert!(!w2.qualified);
    }

    #[test]
    fn intersection_split_outside_domain() {
        // f = 1 is unbounded over {x ≥ 0} ∩ {x ≥ -1} = {x ≥ 0}.
        let p1 = Polyhedron::halfspace(vec![q(-1, 1)], q(0, 1));
        let p2 = Polyhedron::halfspace(vec![q(-1, 1)], q(1, 1));
        assert_eq!(
            support_intersection_split(&p1, &p2, &[q(1, 1)]),
            Err(Error::Unbounded)
        );
        // Disjoint inputs are rejected outright.
        assert!(matches!(
            support_intersection_split(&seg(0, 1), &seg(2, 3), &[q(1, 1)]),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn conjugate_of_abs_is_indicator() {
        let c = conjugate(&abs()).unwrap();
        let expected = ConvexExpr::indicator(seg(-1, 1)).unwrap();
        assert!(exprs_equal(&c, &expected));
    }

    #[test]
    fn conjugate_of_origin_indicator_is_zero() {
        let f = ConvexExpr::indicator(Polyhedron::point(&[q(0, 1)])).unwrap();
        let c = conjugate(&f).unwrap();
        assert!(exprs_equal(&c, &ConvexExpr::zero(1)));
    }

    #[test]
    fn conjugate_of_two_piece_max() {
        // (max{x, 2x−1})*: domain [1,2], 0 at 1, 1 at 2, linear between.
        let f = ConvexExpr::max_affine(vec![(vec![q(1, 1)], q(0, 1)), (vec![q(2, 1)], q(-1, 1))])
            .unwrap();
        let c = conjugate(&f).unwrap();
        assert!(c.domain().set_eq(&seg(1, 2)).unwrap());
        assert_eq!(c.eval(&[q(1, 1)]).unwrap(), ExtReal::zero());
        assert_eq!(c.eval(&[q(2, 1)]).unwrap(), ExtReal::Finite(q(1, 1)));
        assert_eq!(c.eval(&[q(3, 2)]).unwrap(), ExtReal::Finite(q(1, 2)));
        assert_eq!(c.eval(&[q(3, 1)]).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn epigraph_route_matches_conjugate() {
        let f = abs();
        let c = conjugate(&f).unwrap();
        for i in -8..=8 {
            let s = [q(i, 4)];
            assert_eq!(conjugate_via_epigraph(&f, &s).unwrap(), c.eval(&s).unwrap());
        }
        // Spec spot values.
        assert_eq!(conjugate_via_epigraph(&f, &[q(1, 2)]).unwrap(), ExtReal::zero());
        assert_eq!(conjugate_via_epigraph(&f, &[q(2, 1)]).unwrap(), ExtReal::PosInf);
        let origin = ConvexExpr::indicator(Polyhedron::point(&[q(0, 1)])).unwrap();
        assert_eq!(conjugate_via_epigraph(&origin, &[q(5, 1)]).unwrap(), ExtReal::zero());
    }

    #[test]
    fn biconjugation_is_identity() {
        let candidates = vec![
            abs(),
            ConvexExpr::sum(abs(), ConvexExpr::indicator(seg(-1, 2)).unwrap()).unwrap(),
            ConvexExpr::max_affine(vec![(vec![q(1, 1)], q(0, 1)), (vec![q(2, 1)], q(-1, 1))])
                .unwrap(),
            ConvexExpr::indicator(seg(0, 1)).unwrap(),
        ];
        for f in candidates {
            let ff = conjugate(&conjugate(&f).unwrap()).unwrap();
            assert!(exprs_equal(&f, &ff));
        }
    }

    #[test]
    fn sum_split_example() {
        // φ1 = |x|, φ2 = δ_[1,2], f = 0: (φ1+φ2)*(0) = −1.
        let phi2 = ConvexExpr::indicator(seg(1, 2)).unwrap();
        let w = conjugate_sum_split(&abs(), &phi2, &[q(0, 1)]).unwrap();
        assert_eq!(w.total(), q(-1, 1));
        assert_eq!(w.parts.0[0].clone() + w.parts.1[0].clone(), q(0, 1));
        // The witness values are the separate conjugates at the split.
        assert_eq!(
            conjugate_via_epigraph(&abs(), &w.parts.0).unwrap(),
            ExtReal::Finite(w.values.0.clone())
        );
        assert_eq!(
            conjugate_via_epigraph(&phi2, &w.parts.1).unwrap(),
            ExtReal::Finite(w.values.1.clone())
        );
    }

    #[test]
    fn sum_split_degenerate_identity() {
        let zero = ConvexExpr::zero(1);
        let w = conjugate_sum_split(&zero, &abs(), &[q(1, 2)]).unwrap();
        assert_eq!(w.total(), q(0, 1));
    }

    #[test]
    fn chain_witness_identity_map() {
        let (s, v) = conjugate_chain_witness(&abs(), &LinearMap::identity(1), &[q(1, 1)]).unwrap();
        assert_eq!(s, vec![q(1, 1)]);
        assert_eq!(v, q(0, 1));
    }

    #[test]
    fn chain_witness_diagonal_embedding() {
        // A x = (x, x), φ(y) = |y1| + |y2|, f = 1: value 0 with s1+s2 = 1.
        let a = LinearMap::from_rows(vec![vec![q(1, 1)], vec![q(1, 1)]]).unwrap();
        let phi = ConvexExpr::sum(
            ConvexExpr::max_affine(vec![
                (vec![q(1, 1), q(0, 1)], q(0, 1)),
                (vec![q(-1, 1), q(0, 1)], q(0, 1)),
            ])
            .unwrap(),
            ConvexExpr::max_affine(vec![
                (vec![q(0, 1), q(1, 1)], q(0, 1)),
                (vec![q(0, 1), q(-1, 1)], q(0, 1)),
            ])
            .unwrap(),
        )
        .unwrap();
        let (s, v) = conjugate_chain_witness(&phi, &a, &[q(1, 1)]).unwrap();
        assert_eq!(s[0].clone() + s[1].clone(), q(1, 1));
        assert_eq!(v, q(0, 1));
        assert!(s.iter().all(|si| si.abs() <= q(1, 1)));
    }

    #[test]
    fn chain_witness_zero_map() {
        let a = LinearMap::zero(1, 1);
        let (s, v) = conjugate_chain_witness(&abs(), &a, &[q(0, 1)]).unwrap();
        assert_eq!(v, q(0, 1));
        assert!(s[0].abs() <= q(1, 1));
    }

    #[test]
    fn chain_witness_no_preimage() {
        // A = 0 but f ≠ 0: (A*)⁻¹(f) = ∅.
        let a = LinearMap::zero(1, 1);
        assert_eq!(
            conjugate_chain_witness(&abs(), &a, &[q(1, 1)]),
            Err(Error::NoPreimage)
        );
    }

    #[test]
    fn inf_convolution_examples() {
        // |x| □ δ_{0} = |x|.
        let delta0 = ConvexExpr::indicator(Polyhedron::point(&[q(0, 1)])).unwrap();
        let r = inf_convolution(&abs(), &delta0).unwrap();
        assert!(exprs_equal(&r, &abs()));

        // δ_[0,1] □ δ_[0,1] = δ_[0,2].
        let ind01 = ConvexExpr::indicator(seg(0, 1)).unwrap();
        let r = inf_convolution(&ind01, &ind01).unwrap();
        assert!(exprs_equal(&r, &ConvexExpr::indicator(seg(0, 2)).unwrap()));

        // |x| □ 2|x| = |x|.
        let twoabs = ConvexExpr::scale(q(2, 1), abs()).unwrap();
        let r = inf_convolution(&abs(), &twoabs).unwrap();
        assert!(exprs_equal(&r, &abs()));
    }

    #[test]
    fn inf_convolution_improper_flagged() {
        // x □ x (affine) is unbounded below.
        let lin = ConvexExpr::affine(vec![q(1, 1)], q(0, 1));
        assert!(matches!(
            inf_convolution(&lin, &ConvexExpr::scale(q(2, 1), lin.clone()).unwrap()),
            Err(Error::Improper(_))
        ));
    }

    #[test]
    fn inf_convolution_conjugate_identity() {
        // (φ1 □ φ2)* = φ1* + φ2* pointwise.
        let ind = ConvexExpr::indicator(seg(-1, 1)).unwrap();
        let conv = inf_convolution(&abs(), &ind).unwrap();
        let lhs = conjugate(&conv).unwrap();
        for i in -10..=10 {
            let s = [q(i, 3)];
            let rhs = conjugate_via_epigraph(&abs(), &s).unwrap()
                + conjugate_via_epigraph(&ind, &s).unwrap();
            assert_eq!(lhs.eval(&s).unwrap(), rhs);
        }
    }

    #[test]
    fn fenchel_young_inequality() {
        let f = ConvexExpr::sum(abs(), ConvexExpr::indicator(seg(-2, 3)).unwrap()).unwrap();
        let c = conjugate(&f).unwrap();
        for xi in -6..=9 {
            for si in -4..=4 {
                let x = [q(xi, 3)];
                let s = [q(si, 2)];
                let fx = f.eval(&x).unwrap();
                let cs = c.eval(&s).unwrap();
                let pairing = ExtReal::Finite(q(xi, 3) * q(si, 2));
                if fx.is_finite() || cs.is_finite() {
                    assert!(fx + cs >= pairing);
                }
            }
        }
    }
}
