//! Fenchel primal/dual solving and the strong-duality report.
//!
//! Primal: minimize `φ(x) + ψ(Ax)`. Dual: maximize `−φ*(A*g) − ψ*(−g)`. Both
//! are solved exactly as LPs through epigraph liftings; the report records
//! which core qualifications held so callers can assert the zero gap and
//! dual attainment exactly when the theorem promises them.

use crate::conjugate::conjugate;
use crate::expr::ConvexExpr;
use crate::linalg::LinearMap;
use crate::lp::{solve_lp, LpOutcome, Sense};
use crate::poly::{core_meets, range_subspace, Polyhedron};
use crate::report::{DualityReport, ExtReal};
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FenchelProblem<T> {
    pub phi: ConvexExpr<T>,
    pub psi: ConvexExpr<T>,
    pub map: LinearMap<T>,
}

impl<T: Scalar> FenchelProblem<T> {
    pub fn new(phi: ConvexExpr<T>, psi: ConvexExpr<T>, map: LinearMap<T>) -> Result<Self> {
        if map.cols() != phi.dim() {
            return Err(Error::Dimension { expected: phi.dim(), got: map.cols() });
        }
        if map.rows() != psi.dim() {
            return Err(Error::Dimension { expected: psi.dim(), got: map.rows() });
        }
        Ok(Self { phi, psi, map })
    }

    fn primal_dim(&self) -> usize {
        self.phi.dim()
    }

    fn dual_dim(&self) -> usize {
        self.psi.dim()
    }

    /// `dom(ψ∘A) = {x : A x ∈ dom ψ}`.
    pub fn pullback_domain(&self) -> Polyhedron<T> {
        let dom = self.psi.domain();
        let adj = self.map.adjoint();
        let pull = |c: &crate::poly::LinearConstraint<T>| {
            (adj.apply(&c.normal).expect("dims"), c.offset.clone())
        };
        Polyhedron::from_rows(
            self.primal_dim(),
            dom.ineqs().iter().map(pull).collect(),
            dom.eqs().iter().map(pull).collect(),
        )
        .expect("consistent dims")
    }
}

/// Exact primal optimum of `min φ(x) + ψ(Ax)` with an optimizer when finite.
pub fn solve_primal<T: Scalar>(
    prob: &FenchelProblem<T>,
) -> Result<(ExtReal<T>, Option<Vec<T>>)> {
    let n = prob.primal_dim();
    // Coordinates (x, t1, t2): (x, t1) ∈ epi φ and (A x, t2) ∈ epi ψ.
    let total = n + 2;
    let positions: Vec<usize> = (0..n).chain([n]).collect();
    let lifted_phi = prob.phi.epigraph().embed(total, &positions)?;
    let epi_psi = prob.psi.epigraph();
    let m = prob.dual_dim();
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let spread = |c: &crate::poly::LinearConstraint<T>| {
        let mut normal = vec![T::zero(); total];
        for j in 0..n {
            let mut acc = T::zero();
            for i in 0..m {
                acc = acc + c.normal[i].clone() * prob.map.entry(i, j).clone();
            }
            normal[j] = acc;
        }
        normal[n + 1] = c.normal[m].clone();
        (normal, c.offset.clone())
    };
    for c in epi_psi.ineqs() {
        ineqs.push(spread(c));
    }
    for c in epi_psi.eqs() {
        eqs.push(spread(c));
    }
    let feasible = lifted_phi.intersect(&Polyhedron::from_rows(total, ineqs, eqs)?)?;
    let mut objective = vec![T::zero(); n];
    objective.push(T::one());
    objective.push(T::one());
    Ok(match solve_lp(&objective, Sense::Min, &feasible)? {
        LpOutcome::Optimal { value, point } => {
            (ExtReal::Finite(value), Some(point[..n].to_vec()))
        }
        LpOutcome::Unbounded { .. } => (ExtReal::NegInf, None),
        LpOutcome::Infeasible { .. } => (ExtReal::PosInf, None),
    })
}

/// Exact dual optimum of `max −φ*(A*g) − ψ*(−g)` with an attaining `g`.
pub fn solve_dual<T: Scalar>(
    prob: &FenchelProblem<T>,
) -> Result<(ExtReal<T>, Option<Vec<T>>)> {
    let m = prob.dual_dim();
    let n = prob.primal_dim();
    let conj_phi = conjugate(&prob.phi)?.epigraph();
    let conj_psi = conjugate(&prob.psi)?.epigraph();
    // Coordinates (g, r1, r2): (A*g, r1) ∈ epi φ*, (−g, r2) ∈ epi ψ*;
    // maximize −(r1 + r2).
    let total = m + 2;
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    {
        let spread_phi = |c: &crate::poly::LinearConstraint<T>| {
            // a·(A*g) = (A a)·g.
            let mut normal = vec![T::zero(); total];
            let image = prob.map.apply(&c.normal[..n]).expect("dims");
            normal[..m].clone_from_slice(&image);
            normal[m] = c.normal[n].clone();
            (normal, c.offset.clone())
        };
        for c in conj_phi.ineqs() {
            ineqs.push(spread_phi(c));
        }
        for c in conj_phi.eqs() {
            eqs.push(spread_phi(c));
        }
    }
    {
        let spread_psi = |c: &crate::poly::LinearConstraint<T>| {
            let mut normal = vec![T::zero(); total];
            for i in 0..m {
                normal[i] = -c.normal[i].clone();
            }
            normal[m + 1] = c.normal[m].clone();
            (normal, c.offset.clone())
        };
        for c in conj_psi.ineqs() {
            ineqs.push(spread_psi(c));
        }
        for c in conj_psi.eqs() {
            eqs.push(spread_psi(c));
        }
    }
    let feasible = Polyhedron::from_rows(total, ineqs, eqs)?;
    let mut objective = vec![T::zero(); m];
    objective.push(-T::one());
    objective.push(-T::one());
    Ok(match solve_lp(&objective, Sense::Max, &feasible)? {
        LpOutcome::Optimal { value, point } => {
            (ExtReal::Finite(value), Some(point[..m].to_vec()))
        }
        LpOutcome::Unbounded { .. } => (ExtReal::PosInf, None),
        LpOutcome::Infeasible { .. } => (ExtReal::NegInf, None),
    })
}

/// Solves both sides, checks the qualifications, and reports.
pub fn fenchel_report<T: Scalar>(prob: &FenchelProblem<T>) -> Result<DualityReport<T>> {
    let (primal_value, primal_opt) = solve_primal(prob)?;
    let (dual_value, dual_opt) = solve_dual(prob)?;

    let dom_phi = prob.phi.domain();
    let dom_psi = prob.psi.domain();
    let pullback = prob.pullback_domain();
    let qcd = core_meets(&dom_phi, &pullback)?;
    let qcd1 = core_meets(&pullback, &dom_phi)?;
    let range_core = core_meets(&dom_psi, &range_subspace(&prob.map))?;
    // The corollary's sufficient condition dom(ψ) ∩ A(core(dom φ)) ≠ ∅
    // coincides with (QCD) set-theoretically; it is recorded separately for
    // the report's sake.
    let corollary = qcd;
    let qualified = range_core && (qcd || qcd1);

    let gap = match (&primal_value, &dual_value) {
        (ExtReal::Finite(p), ExtReal::Finite(d)) => Some(p.clone() - d.clone()),
        _ => None,
    };
    let attained = primal_value.is_finite() && dual_value.is_finite() && dual_opt.is_some();
    let report = DualityReport {
        primal_value,
        dual_value,
        gap,
        primal_opt,
        dual_opt,
        qualifications: vec![
            ("dom(psi.A) meets core(dom phi)", qcd),
            ("core(dom(psi.A)) meets dom phi", qcd1),
            ("range(A) meets core(dom psi)", range_core),
            ("dom psi meets A(core(dom phi))", corollary),
        ],
        qualified,
        slater: None,
        attained,
    };
    debug_assert!(report.weak_duality_holds());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn abs() -> ConvexExpr<Q> {
        ConvexExpr::abs1()
    }

    fn halfline_geq(a: i64) -> Polyhedron<Q> {
        // {x ≥ a}
        Polyhedron::halfspace(vec![q(-1, 1)], q(-a, 1))
    }

    #[test]
    fn primal_abs_shifted() {
        // min |x| + δ_{[1,∞)}(x) = 1 at x = 1.
        let prob = FenchelProblem::new(
            abs(),
            ConvexExpr::indicator(halfline_geq(1)).unwrap(),
            LinearMap::identity(1),
        )
        .unwrap();
        let (v, x) = solve_primal(&prob).unwrap();
        assert_eq!(v, ExtReal::Finite(q(1, 1)));
        assert_eq!(x.unwrap(), vec![q(1, 1)]);
    }

    #[test]
    fn primal_zero_map() {
        let prob = FenchelProblem::new(
            ConvexExpr::zero(1),
            ConvexExpr::indicator(Polyhedron::point(&[q(0, 1)])).unwrap(),
            LinearMap::zero(1, 1),
        )
        .unwrap();
        let (v, x) = solve_primal(&prob).unwrap();
        assert_eq!(v, ExtReal::zero());
        assert!(x.is_some());
    }

    #[test]
    fn primal_unbounded() {
        let prob = FenchelProblem::new(
            ConvexExpr::affine(vec![q(1, 1)], q(0, 1)),
            ConvexExpr::zero(1),
            LinearMap::identity(1),
        )
        .unwrap();
        let (v, _) = solve_primal(&prob).unwrap();
        assert_eq!(v, ExtReal::NegInf);
        // Weak duality forces the dual down as well.
        let (d, _) = solve_dual(&prob).unwrap();
        assert_eq!(d, ExtReal::NegInf);
    }

    #[test]
    fn dual_attains_on_qualified_instance() {
        let prob = FenchelProblem::new(
            abs(),
            ConvexExpr::indicator(halfline_geq(1)).unwrap(),
            LinearMap::identity(1),
        )
        .unwrap();
        let (d, g) = solve_dual(&prob).unwrap();
        assert_eq!(d, ExtReal::Finite(q(1, 1)));
        // The attaining g gives −φ*(g) − ψ*(−g) = 1 exactly.
        let g = g.unwrap();
        let phi_star = crate::conjugate::conjugate_via_epigraph(&abs(), &g).unwrap();
        let psi = ConvexExpr::indicator(halfline_geq(1)).unwrap();
        let minus_g: Vec<Q> = vec![-g[0].clone()];
        let psi_star = crate::conjugate::conjugate_via_epigraph(&psi, &minus_g).unwrap();
        assert_eq!(
            (phi_star + psi_star).neg(),
            ExtReal::Finite(q(1, 1))
        );
    }

    #[test]
    fn report_on_qualified_instance() {
        let prob = FenchelProblem::new(
            abs(),
            ConvexExpr::indicator(halfline_geq(1)).unwrap(),
            LinearMap::identity(1),
        )
        .unwrap();
        let r = fenchel_report(&prob).unwrap();
        assert!(r.qualified);
        assert_eq!(r.gap, Some(q(0, 1)));
        assert!(r.attained);
        assert!(r.weak_duality_holds());
        // Primal consistency: p equals the objective at the optimizer.
        let x = r.primal_opt.clone().unwrap();
        let ax = prob.map.apply(&x).unwrap();
        let obj = prob.phi.eval(&x).unwrap() + prob.psi.eval(&ax).unwrap();
        assert_eq!(obj, r.primal_value);
    }

    #[test]
    fn report_unqualified_zero_gap_coincidence() {
        // φ = ψ = δ_{0}, A = id: cores are empty, no qualification, but the
        // gap is still zero (the theorem is sufficient, not necessary).
        let delta0 = ConvexExpr::indicator(Polyhedron::point(&[q(0, 1)])).unwrap();
        let prob =
            FenchelProblem::new(delta0.clone(), delta0, LinearMap::identity(1)).unwrap();
        let r = fenchel_report(&prob).unwrap();
        assert!(!r.qualified);
        assert!(r.qualifications.iter().all(|(_, held)| !held));
        assert_eq!(r.primal_value, ExtReal::zero());
        assert_eq!(r.dual_value, ExtReal::zero());
    }

    #[test]
    fn report_infeasible_primal() {
        // dom φ = {0}, ψ = δ_{[1,∞)}, A = id: domains miss; p = +∞.
        let prob = FenchelProblem::new(
            ConvexExpr::indicator(Polyhedron::point(&[q(0, 1)])).unwrap(),
            ConvexExpr::indicator(halfline_geq(1)).unwrap(),
            LinearMap::identity(1),
        )
        .unwrap();
        let r = fenchel_report(&prob).unwrap();
        assert_eq!(r.primal_value, ExtReal::PosInf);
        assert!(r.weak_duality_holds());
    }

    #[test]
    fn theorem_special_case_identity_map() {
        // inf(φ+ψ) = sup(−φ*(−f)−ψ*(f)) under core(dom φ) ∩ dom ψ ≠ ∅.
        let phi = ConvexExpr::sum(
            abs(),
            ConvexExpr::indicator(Polyhedron::box_(&[q(-2, 1)], &[q(2, 1)]).unwrap()).unwrap(),
        )
        .unwrap();
        let psi = ConvexExpr::max_affine(vec![(vec![q(1, 2)], q(1, 1)), (vec![q(-1, 1)], q(0, 1))])
            .unwrap();
        let prob = FenchelProblem::new(phi, psi, LinearMap::identity(1)).unwrap();
        let r = fenchel_report(&prob).unwrap();
        assert!(r.qualified);
        assert!(r.zero_gap());
        assert!(r.attained);
    }

    #[test]
    fn rectangular_map_instance() {
        // φ on ℝ², ψ on ℝ, A = [1 −1].
        let phi = ConvexExpr::sum(
            ConvexExpr::max_affine(vec![
                (vec![q(1, 1), q(0, 1)], q(0, 1)),
                (vec![q(-1, 1), q(0, 1)], q(0, 1)),
                (vec![q(0, 1), q(1, 1)], q(0, 1)),
                (vec![q(0, 1), q(-1, 1)], q(0, 1)),
            ])
            .unwrap(),
            ConvexExpr::indicator(
                Polyhedron::box_(&[q(-3, 1), q(-3, 1)], &[q(3, 1), q(3, 1)]).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        let psi = ConvexExpr::indicator(halfline_geq(2)).unwrap();
        let a = LinearMap::from_rows(vec![vec![q(1, 1), q(-1, 1)]]).unwrap();
        let prob = FenchelProblem::new(phi, psi, a).unwrap();
        let r = fenchel_report(&prob).unwrap();
        assert!(r.qualified);
        assert!(r.zero_gap());
        // max(|x1|,|x2|) minimized over x1 − x2 ≥ 2 gives 1 at (1,−1).
        assert_eq!(r.primal_value, ExtReal::Finite(q(1, 1)));
    }
}
