//! Piecewise-linear convex functions as expression trees.
//!
//! Every node is convex by construction and proper (nonempty domain) by the
//! smart constructors. The normal form of any expression is a max-affine
//! part plus a polyhedral indicator; [`ConvexExpr::normalize`] computes it
//! and everything downstream (epigraphs, conjugates, subdifferentials) is
//! exact because of it.

use crate::linalg::{self, dot, LinearMap};
use crate::poly::Polyhedron;
use crate::report::ExtReal;
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexExpr<T> {
    /// `c·x + c0`.
    Affine { coef: Vec<T>, constant: T },
    /// `max_i (a_i·x + b_i)`, at least one piece.
    MaxAffine { pieces: Vec<(Vec<T>, T)> },
    /// `δ_P`: 0 on `P`, +∞ outside.
    Indicator { set: Polyhedron<T> },
    Sum(Box<ConvexExpr<T>>, Box<ConvexExpr<T>>),
    Max(Vec<ConvexExpr<T>>),
    /// `x ↦ inner(A x)`.
    PreComposeLinear { map: LinearMap<T>, inner: Box<ConvexExpr<T>> },
    /// `λ·inner` with `λ ≥ 0`; `λ = 0` keeps the domain (0·∞ = ∞ here).
    ScaleNonneg { factor: T, inner: Box<ConvexExpr<T>> },
}

impl<T: Scalar> ConvexExpr<T> {
    pub fn affine(coef: Vec<T>, constant: T) -> Self {
        ConvexExpr::Affine { coef, constant }
    }

    pub fn constant(dim: usize, value: T) -> Self {
        ConvexExpr::Affine { coef: vec![T::zero(); dim], constant: value }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, T::zero())
    }

    /// `|x|` in one variable.
    pub fn abs1() -> Self {
        ConvexExpr::MaxAffine {
            pieces: vec![(vec![T::one()], T::zero()), (vec![-T::one()], T::zero())],
        }
    }

    pub fn max_affine(pieces: Vec<(Vec<T>, T)>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::Invalid("max-affine requires at least one piece"));
        };
        let dim = first.0.len();
        if pieces.iter().any(|(a, _)| a.len() != dim) {
            return Err(Error::Dimension { expected: dim, got: 0 });
        }
        Ok(ConvexExpr::MaxAffine { pieces })
    }

    pub fn indicator(set: Polyhedron<T>) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::Improper("indicator of an empty set"));
        }
        Ok(ConvexExpr::Indicator { set })
    }

    pub fn sum(left: ConvexExpr<T>, right: ConvexExpr<T>) -> Result<Self> {
        if left.dim() != right.dim() {
            return Err(Error::Dimension { expected: left.dim(), got: right.dim() });
        }
        let out = ConvexExpr::Sum(Box::new(left), Box::new(right));
        if out.domain().is_empty() {
            return Err(Error::Improper("sum with disjoint domains"));
        }
        Ok(out)
    }

    pub fn max_of(children: Vec<ConvexExpr<T>>) -> Result<Self> {
        let Some(first) = children.first() else {
            return Err(Error::Invalid("max requires at least one child"));
        };
        let dim = first.dim();
        if children.iter().any(|c| c.dim() != dim) {
            return Err(Error::Dimension { expected: dim, got: 0 });
        }
        let out = ConvexExpr::Max(children);
        if out.domain().is_empty() {
            return Err(Error::Improper("max with disjoint domains"));
        }
        Ok(out)
    }

    pub fn precompose(inner: ConvexExpr<T>, map: LinearMap<T>) -> Result<Self> {
        if map.rows() != inner.dim() {
            return Err(Error::Dimension { expected: inner.dim(), got: map.rows() });
        }
        let out = ConvexExpr::PreComposeLinear { map, inner: Box::new(inner) };
        if out.domain().is_empty() {
            return Err(Error::Improper("composition misses the inner domain"));
        }
        Ok(out)
    }

    pub fn scale(factor: T, inner: ConvexExpr<T>) -> Result<Self> {
        if factor < T::zero() {
            return Err(Error::Invalid("scale factor must be nonnegative"));
        }
        Ok(ConvexExpr::ScaleNonneg { factor, inner: Box::new(inner) })
    }

    /// Ambient (input) dimension.
    pub fn dim(&self) -> usize {
        match self {
            ConvexExpr::Affine { coef, .. } => coef.len(),
            ConvexExpr::MaxAffine { pieces } => pieces[0].0.len(),
            ConvexExpr::Indicator { set } => set.dim(),
            ConvexExpr::Sum(l, _) => l.dim(),
            ConvexExpr::Max(children) => children[0].dim(),
            ConvexExpr::PreComposeLinear { map, .. } => map.cols(),
            ConvexExpr::ScaleNonneg { inner, .. } => inner.dim(),
        }
    }

    /// Exact evaluation; `PosInf` iff `x ∉ dom`.
    pub fn eval(&self, x: &[T]) -> Result<ExtReal<T>> {
        if x.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: x.len() });
        }
        Ok(match self {
            ConvexExpr::Affine { coef, constant } => {
                ExtReal::Finite(dot(coef, x) + constant.clone())
            }
            ConvexExpr::MaxAffine { pieces } => {
                let mut best: Option<T> = None;
                for (a, b) in pieces {
                    let v = dot(a, x) + b.clone();
                    if best.as_ref().is_none_or(|cur| v > *cur) {
                        best = Some(v);
                    }
                }
                ExtReal::Finite(best.expect("at least one piece"))
            }
            ConvexExpr::Indicator { set } => {
                if set.contains(x) {
                    ExtReal::zero()
                } else {
                    ExtReal::PosInf
                }
            }
            ConvexExpr::Sum(l, r) => l.eval(x)? + r.eval(x)?,
            ConvexExpr::Max(children) => {
                let mut best = children[0].eval(x)?;
                for c in &children[1..] {
                    let v = c.eval(x)?;
                    if v > best {
                        best = v;
                    }
                }
                best
            }
            ConvexExpr::PreComposeLinear { map, inner } => inner.eval(&map.apply(x)?)?,
            ConvexExpr::ScaleNonneg { factor, inner } => {
                inner.eval(x)?.scale_nonneg(factor)
            }
        })
    }

    /// Exact H-representation of the effective domain.
    pub fn domain(&self) -> Polyhedron<T> {
        match self {
            ConvexExpr::Affine { coef, .. } => Polyhedron::universe(coef.len()),
            ConvexExpr::MaxAffine { pieces } => Polyhedron::universe(pieces[0].0.len()),
            ConvexExpr::Indicator { set } => set.clone(),
            ConvexExpr::Sum(l, r) => l
                .domain()
                .intersect(&r.domain())
                .expect("dims checked at construction"),
            ConvexExpr::Max(children) => {
                let mut dom = children[0].domain();
                for c in &children[1..] {
                    dom = dom.intersect(&c.domain()).expect("dims checked");
                }
                dom
            }
            ConvexExpr::PreComposeLinear { map, inner } => {
                // Pull back: {x : A x ∈ dom(inner)}.
                let dom = inner.domain();
                let pull = |c: &crate::poly::LinearConstraint<T>| {
                    (map.adjoint().apply(&c.normal).expect("dims"), c.offset.clone())
                };
                Polyhedron::from_rows(
                    map.cols(),
                    dom.ineqs().iter().map(pull).collect(),
                    dom.eqs().iter().map(pull).collect(),
                )
                .expect("consistent dims")
            }
            ConvexExpr::ScaleNonneg { inner, .. } => inner.domain(),
        }
    }

    /// Lowers to the normal form: max-affine pieces over a polyhedral domain.
    /// The pieces are pruned so none is dominated on the domain.
    pub fn normalize(&self) -> NormalForm<T> {
        let (pieces, domain) = self.lower();
        NormalForm::new(self.dim(), pieces, domain)
    }

    fn lower(&self) -> (Vec<(Vec<T>, T)>, Polyhedron<T>) {
        match self {
            ConvexExpr::Affine { coef, constant } => (
                vec![(coef.clone(), constant.clone())],
                Polyhedron::universe(coef.len()),
            ),
            ConvexExpr::MaxAffine { pieces } => {
                (pieces.clone(), Polyhedron::universe(self.dim()))
            }
            ConvexExpr::Indicator { set } => {
                (vec![(vec![T::zero(); set.dim()], T::zero())], set.clone())
            }
            ConvexExpr::Sum(l, r) => {
                let (pl, dl) = l.lower();
                let (pr, dr) = r.lower();
                let mut pieces = Vec::with_capacity(pl.len() * pr.len());
                for (a, b) in &pl {
                    for (c, d) in &pr {
                        pieces.push((linalg::add(a, c), b.clone() + d.clone()));
                    }
                }
                (pieces, dl.intersect(&dr).expect("dims checked"))
            }
            ConvexExpr::Max(children) => {
                let mut pieces = Vec::new();
                let mut dom = Polyhedron::universe(self.dim());
                for c in children {
                    let (p, d) = c.lower();
                    pieces.extend(p);
                    dom = dom.intersect(&d).expect("dims checked");
                }
                (pieces, dom)
            }
            ConvexExpr::PreComposeLinear { map, inner } => {
                let (p, _) = inner.lower();
                let adj = map.adjoint();
                let pieces = p
                    .into_iter()
                    .map(|(a, b)| (adj.apply(&a).expect("dims"), b))
                    .collect();
                (pieces, self.domain())
            }
            ConvexExpr::ScaleNonneg { factor, inner } => {
                let (p, d) = inner.lower();
                if factor.is_zero() {
                    return (vec![(vec![T::zero(); self.dim()], T::zero())], d);
                }
                let pieces = p
                    .into_iter()
                    .map(|(a, b)| (linalg::scale(factor, &a), factor.clone() * b))
                    .collect();
                (pieces, d)
            }
        }
    }

    /// Exact H-representation of the epigraph in `ℝ^{dim+1}` (last
    /// coordinate is the epigraph variable).
    pub fn epigraph(&self) -> Polyhedron<T> {
        self.normalize().epigraph()
    }

    /// The lemma witness `(x̄, f(x̄) + 1)` with `x̄ ∈ core(dom f)`, when the
    /// domain is core-solid; the returned pair lies in `core(epi f)`.
    pub fn epigraph_core_witness(&self) -> Option<(Vec<T>, T)> {
        let x = self.domain().core_point()?;
        let v = self.eval(&x).expect("core point is in the domain").unwrap_finite();
        Some((x, v + T::one()))
    }
}

/// Max-affine + indicator normal form of a PL convex function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm<T> {
    pub dim: usize,
    pub pieces: Vec<(Vec<T>, T)>,
    pub domain: Polyhedron<T>,
}

impl<T: Scalar> NormalForm<T> {
    /// Builds a normal form from raw pieces and a domain, pruning dominated
    /// pieces. At least one piece is required.
    pub fn from_parts(dim: usize, pieces: Vec<(Vec<T>, T)>, domain: Polyhedron<T>) -> Self {
        assert!(!pieces.is_empty(), "normal form needs at least one piece");
        Self::new(dim, pieces, domain)
    }

    fn new(dim: usize, mut pieces: Vec<(Vec<T>, T)>, domain: Polyhedron<T>) -> Self {
        pieces.sort();
        pieces.dedup();
        let pieces = prune_pieces(pieces, &domain);
        Self { dim, pieces, domain }
    }

    pub fn eval(&self, x: &[T]) -> ExtReal<T> {
        if !self.domain.contains(x) {
            return ExtReal::PosInf;
        }
        ExtReal::Finite(
            self.pieces
                .iter()
                .map(|(a, b)| dot(a, x) + b.clone())
                .max()
                .expect("at least one piece"),
        )
    }

    /// Epigraph rows: `a·x − t ≤ −b` per piece plus the domain rows.
    pub fn epigraph(&self) -> Polyhedron<T> {
        let n = self.dim;
        let mut ineqs = Vec::new();
        for (a, b) in &self.pieces {
            let mut normal = a.clone();
            normal.push(-T::one());
            ineqs.push((normal, -b.clone()));
        }
        for c in self.domain.ineqs() {
            let mut normal = c.normal.clone();
            normal.push(T::zero());
            ineqs.push((normal, c.offset.clone()));
        }
        let eqs = self
            .domain
            .eqs()
            .iter()
            .map(|c| {
                let mut normal = c.normal.clone();
                normal.push(T::zero());
                (normal, c.offset.clone())
            })
            .collect();
        Polyhedron::from_rows(n + 1, ineqs, eqs)
            .expect("consistent dims")
            .pruned()
    }

    /// The normal form as an expression tree.
    pub fn to_expr(&self) -> ConvexExpr<T> {
        let ma = ConvexExpr::MaxAffine { pieces: self.pieces.clone() };
        let universe = self.domain.ineqs().is_empty() && self.domain.eqs().is_empty();
        if universe {
            ma
        } else {
            ConvexExpr::Sum(
                Box::new(ma),
                Box::new(ConvexExpr::Indicator { set: self.domain.clone() }),
            )
        }
    }
}

/// Drops pieces that never attain the maximum on the domain.
fn prune_pieces<T: Scalar>(
    pieces: Vec<(Vec<T>, T)>,
    domain: &Polyhedron<T>,
) -> Vec<(Vec<T>, T)> {
    if pieces.len() <= 1 || domain.is_empty() {
        return pieces;
    }
    let n = domain.dim();
    let mut kept = pieces;
    let mut i = 0;
    while i < kept.len() && kept.len() > 1 {
        // Piece i is redundant iff max { a_i·x + b_i − t } ≤ 0 over
        // x ∈ dom, t ≥ a_j·x + b_j for all j ≠ i.
        let mut ineqs: Vec<(Vec<T>, T)> = Vec::new();
        for (j, (a, b)) in kept.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut normal = a.clone();
            normal.push(-T::one());
            ineqs.push((normal, -b.clone()));
        }
        for c in domain.ineqs() {
            let mut normal = c.normal.clone();
            normal.push(T::zero());
            ineqs.push((normal, c.offset.clone()));
        }
        let eqs = domain
            .eqs()
            .iter()
            .map(|c| {
                let mut normal = c.normal.clone();
                normal.push(T::zero());
                (normal, c.offset.clone())
            })
            .collect();
        let lifted = Polyhedron::from_rows(n + 1, ineqs, eqs).expect("consistent dims");
        let mut obj = kept[i].0.clone();
        obj.push(-T::one());
        let redundant = match lifted.maximize(&obj) {
            Ok(Some((v, _))) => v + kept[i].1.clone() <= T::zero(),
            Ok(None) => false,
            Err(_) => true, // empty lift: domain empty, keep pieces as-is
        };
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::ExtReal;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn abs() -> ConvexExpr<Q> {
        ConvexExpr::abs1()
    }

    fn seg(a: i64, b: i64) -> Polyhedron<Q> {
        Polyhedron::box_(&[q(a, 1)], &[q(b, 1)]).unwrap()
    }

    #[test]
    fn eval_abs() {
        assert_eq!(abs().eval(&[q(3, 1)]).unwrap(), ExtReal::Finite(q(3, 1)));
        assert_eq!(abs().eval(&[q(-2, 1)]).unwrap(), ExtReal::Finite(q(2, 1)));
    }

    #[test]
    fn eval_indicator_outside() {
        let ind = ConvexExpr::indicator(seg(0, 1)).unwrap();
        assert_eq!(ind.eval(&[q(2, 1)]).unwrap(), ExtReal::PosInf);
        assert_eq!(ind.eval(&[q(1, 2)]).unwrap(), ExtReal::zero());
    }

    #[test]
    fn eval_sum_with_indicator() {
        // |x| + δ_{[1,∞)} at 1.
        let halfline = Polyhedron::halfspace(vec![q(-1, 1)], q(-1, 1));
        let f = ConvexExpr::sum(abs(), ConvexExpr::indicator(halfline).unwrap()).unwrap();
        assert_eq!(f.eval(&[q(1, 1)]).unwrap(), ExtReal::Finite(q(1, 1)));
        assert_eq!(f.eval(&[q(0, 1)]).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn domains() {
        assert!(abs().domain().set_eq(&Polyhedron::universe(1)).unwrap());
        let f = ConvexExpr::sum(abs(), ConvexExpr::indicator(seg(0, 1)).unwrap()).unwrap();
        assert!(f.domain().set_eq(&seg(0, 1)).unwrap());
        // Identity pullback.
        let ind2 = ConvexExpr::indicator(
            Polyhedron::box_(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap(),
        )
        .unwrap();
        let composed = ConvexExpr::precompose(ind2.clone(), LinearMap::identity(2)).unwrap();
        assert!(composed.domain().set_eq(&ind2.domain()).unwrap());
    }

    #[test]
    fn improper_constructions_rejected() {
        assert!(ConvexExpr::<Q>::indicator(Polyhedron::empty(1)).is_err());
        let left = ConvexExpr::indicator(seg(0, 1)).unwrap();
        let right = ConvexExpr::indicator(seg(2, 3)).unwrap();
        assert_eq!(
            ConvexExpr::sum(left, right),
            Err(Error::Improper("sum with disjoint domains"))
        );
    }

    #[test]
    fn epigraph_of_abs() {
        let epi = abs().epigraph();
        let expected = Polyhedron::from_rows(
            2,
            vec![
                (vec![q(1, 1), q(-1, 1)], q(0, 1)),
                (vec![q(-1, 1), q(-1, 1)], q(0, 1)),
            ],
            vec![],
        )
        .unwrap();
        assert!(epi.set_eq(&expected).unwrap());
    }

    #[test]
    fn epigraph_of_indicator() {
        let epi = ConvexExpr::indicator(seg(0, 1)).unwrap().epigraph();
        let expected = Polyhedron::from_rows(
            2,
            vec![
                (vec![q(1, 1), q(0, 1)], q(1, 1)),
                (vec![q(-1, 1), q(0, 1)], q(0, 1)),
                (vec![q(0, 1), q(-1, 1)], q(0, 1)),
            ],
            vec![],
        )
        .unwrap();
        assert!(epi.set_eq(&expected).unwrap());
    }

    #[test]
    fn epigraph_core_witness_is_core_point() {
        let f = abs();
        let (x, t) = f.epigraph_core_witness().unwrap();
        assert_eq!(x, vec![q(0, 1)]);
        assert_eq!(t, q(1, 1));
        let mut point = x;
        point.push(t);
        assert!(f.epigraph().core_contains(&point).unwrap());
    }

    #[test]
    fn normalize_prunes_dominated_pieces() {
        // max{x, 2x − 1, x − 5}: the last piece never wins.
        let f = ConvexExpr::max_affine(vec![
            (vec![q(1, 1)], q(0, 1)),
            (vec![q(2, 1)], q(-1, 1)),
            (vec![q(1, 1)], q(-5, 1)),
        ])
        .unwrap();
        let nf = f.normalize();
        assert_eq!(nf.pieces.len(), 2);
    }

    #[test]
    fn normalize_scale_zero_keeps_domain() {
        let f = ConvexExpr::scale(
            q(0, 1),
            ConvexExpr::sum(abs(), ConvexExpr::indicator(seg(0, 1)).unwrap()).unwrap(),
        )
        .unwrap();
        let nf = f.normalize();
        assert!(nf.domain.set_eq(&seg(0, 1)).unwrap());
        assert_eq!(f.eval(&[q(2, 1)]).unwrap(), ExtReal::PosInf);
        assert_eq!(f.eval(&[q(1, 2)]).unwrap(), ExtReal::zero());
    }

    #[test]
    fn normal_form_matches_eval() {
        let f = ConvexExpr::sum(
            ConvexExpr::max_affine(vec![
                (vec![q(1, 1)], q(0, 1)),
                (vec![q(2, 1)], q(-1, 1)),
            ])
            .unwrap(),
            ConvexExpr::indicator(seg(-2, 3)).unwrap(),
        )
        .unwrap();
        let nf = f.normalize();
        for i in -30..30 {
            let x = [q(i, 7)];
            assert_eq!(f.eval(&x).unwrap(), nf.eval(&x));
        }
    }
}
