//! Exact subdifferentials of PL convex functions, with the max and sum
//! rules checked against direct computation.
//!
//! The ground truth is the normal form: for `f = max_i(a_i·x + b_i) + δ_P`,
//! `∂f(x) = co{a_i : i active} + N(x; P)` holds with no qualification on
//! polyhedral data. The rule operations compute both their formula side and
//! this direct side; under the paper's core qualifications they assert
//! equality, otherwise only the valid inclusion.

use crate::cone::normal_cone;
use crate::expr::ConvexExpr;
use crate::poly::{core_meets, Polyhedron};
use crate::report::ExtReal;
use crate::scalar::Scalar;
use crate::vrep::{vrep, GeneratedSet};
use crate::{Error, Result};

/// A subdifferential set in the dual space, as an exact H-rep polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdifferential<T> {
    pub set: Polyhedron<T>,
}

impl<T: Scalar> Subdifferential<T> {
    pub fn contains(&self, s: &[T]) -> bool {
        self.set.contains(s)
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// `∂f(x)` for PL convex `f`; `Err(NotInDomain)` outside the domain.
pub fn subdifferential<T: Scalar>(f: &ConvexExpr<T>, x: &[T]) -> Result<Subdifferential<T>> {
    if x.len() != f.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: x.len() });
    }
    let nf = f.normalize();
    if !nf.domain.contains(x) {
        return Err(Error::NotInDomain);
    }
    let value = nf.eval(x).unwrap_finite();
    let active: Vec<Vec<T>> = nf
        .pieces
        .iter()
        .filter(|(a, b)| crate::linalg::dot(a, x) + b.clone() == value)
        .map(|(a, _)| a.clone())
        .collect();
    debug_assert!(!active.is_empty());
    let cone = normal_cone(&nf.domain, x).expect("x is in the domain");
    let gen = GeneratedSet::new(f.dim(), active, cone.generators().to_vec());
    Ok(Subdifferential { set: gen.to_hrep()? })
}

/// Outcome of a calculus-rule comparison: the direct subdifferential, the
/// rule's right-hand side, and what was verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleReport<T> {
    pub direct: Polyhedron<T>,
    pub formula: Polyhedron<T>,
    /// The rule's qualification held, so equality was asserted.
    pub qualified: bool,
    /// `formula ⊆ direct` (always valid for both rules).
    pub inclusion: bool,
    /// Set equality; only meaningful (and asserted) when `qualified`.
    pub equal: bool,
}

/// Subdifferential maximum rule at `x̄`:
/// `∂(max_i φ_i)(x̄) = co(∪_{i ∈ I(x̄)} ∂φ_i(x̄))` under
/// `x̄ ∈ ∩_i core(dom φ_i)`; the ⊇ inclusion of the direct side holds
/// unconditionally.
pub fn max_rule<T: Scalar>(phis: &[ConvexExpr<T>], x: &[T]) -> Result<RuleReport<T>> {
    if phis.is_empty() {
        return Err(Error::Invalid("max rule needs at least one function"));
    }
    let n = phis[0].dim();
    if x.len() != n || phis.iter().any(|f| f.dim() != n) {
        return Err(Error::Dimension { expected: n, got: x.len() });
    }
    // x̄ must lie in every domain for the active set to make sense.
    let values: Vec<ExtReal<T>> = phis
        .iter()
        .map(|f| f.eval(x))
        .collect::<Result<_>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotInDomain);
    }
    let qualified = phis
        .iter()
        .map(|f| f.domain().core_contains(x))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);

    let max_value = values.iter().max().expect("nonempty").clone();
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for (f, v) in phis.iter().zip(&values) {
        if *v == max_value {
            let part = subdifferential(f, x)?;
            let vr = vrep(&part.set)?;
            rays.extend(vr.recession_generators());
            points.extend(vr.points);
        }
    }
    let formula = GeneratedSet::new(n, points, rays).to_hrep()?;
    let direct = subdifferential(&ConvexExpr::max_of(phis.to_vec())?, x)?.set;
    let inclusion = direct.includes(&formula)?;
    let equal = inclusion && formula.includes(&direct)?;
    Ok(RuleReport { direct, formula, qualified, inclusion, equal })
}

/// Subdifferential sum rule at `x̄`:
/// `∂(φ₁+φ₂)(x̄) = ∂φ₁(x̄) + ∂φ₂(x̄)` under
/// `core(dom φ₁) ∩ dom φ₂ ≠ ∅` (or symmetrically); the Minkowski sum is
/// always contained in the direct side.
pub fn sum_rule<T: Scalar>(
    phi1: &ConvexExpr<T>,
    phi2: &ConvexExpr<T>,
    x: &[T],
) -> Result<RuleReport<T>> {
    let n = phi1.dim();
    if phi2.dim() != n || x.len() != n {
        return Err(Error::Dimension { expected: n, got: x.len() });
    }
    let qualified = core_meets(&phi1.domain(), &phi2.domain())?
        || core_meets(&phi2.domain(), &phi1.domain())?;
    let d1 = subdifferential(phi1, x)?.set;
    let d2 = subdifferential(phi2, x)?.set;
    let formula = d1.minkowski_sum(&d2)?;
    let direct = subdifferential(&ConvexExpr::sum(phi1.clone(), phi2.clone())?, x)?.set;
    let inclusion = direct.includes(&formula)?;
    let equal = inclusion && formula.includes(&direct)?;
    Ok(RuleReport { direct, formula, qualified, inclusion, equal })
}

/// Fermat rule oracle: `0 ∈ ∂f(x̄)` iff `x̄` minimizes `f`.
pub fn is_minimizer<T: Scalar>(f: &ConvexExpr<T>, x: &[T]) -> Result<bool> {
    let nf = f.normalize();
    if !nf.domain.contains(x) {
        return Err(Error::NotInDomain);
    }
    // minimize t over the epigraph.
    let n = f.dim();
    let mut obj = vec![T::zero(); n];
    obj.push(T::one());
    let epi = nf.epigraph();
    Ok(match epi.minimize(&obj)? {
        Some((min, _)) => ExtReal::Finite(min) == nf.eval(x),
        None => false,
    })
}
