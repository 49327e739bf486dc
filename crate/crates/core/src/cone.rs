//! Polyhedral cones, dual cones and normal cones.
//!
//! A [`Cone`] is stored as a finite generator list (conic hull); the H-rep
//! view is derived through the dual-cone involution. The dual cone here uses
//! the nonnegative pairing `C' = {f : ⟨f, c⟩ ≥ 0 for all c ∈ C}`.

use crate::linalg::{self, dot, LinearMap};
use crate::poly::Polyhedron;
use crate::scalar::Scalar;
use crate::vrep::vrep;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<T> {
    dim: usize,
    generators: Vec<Vec<T>>,
}

impl<T: Scalar> Cone<T> {
    pub fn from_generators(dim: usize, generators: Vec<Vec<T>>) -> Result<Self> {
        for g in &generators {
            if g.len() != dim {
                return Err(Error::Dimension { expected: dim, got: g.len() });
            }
        }
        let mut gens: Vec<Vec<T>> = generators
            .into_iter()
            .filter(|g| !linalg::is_zero(g))
            .map(|g| normalize_direction(&g))
            .collect();
        gens.sort();
        gens.dedup();
        Ok(Self { dim, generators: gens })
    }

    /// The trivial cone `{0}`.
    pub fn zero(dim: usize) -> Self {
        Self { dim, generators: vec![] }
    }

    /// The nonnegative orthant `ℝ^dim_+`.
    pub fn orthant(dim: usize) -> Self {
        Self {
            dim,
            generators: (0..dim).map(|i| linalg::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<T>] {
        &self.generators
    }

    pub fn is_zero_cone(&self) -> bool {
        self.generators.is_empty()
    }

    /// Builds a cone from a homogeneous H-representation by enumerating its
    /// extreme rays (lineality directions become ± generator pairs).
    pub fn from_hrep(p: &Polyhedron<T>) -> Result<Self> {
        if p.ineqs().iter().chain(p.eqs().iter()).any(|c| !c.offset.is_zero()) {
            return Err(Error::Invalid("cone H-representation must be homogeneous"));
        }
        let v = vrep(p)?;
        Cone::from_generators(p.dim(), v.recession_generators())
    }

    /// H-representation `{x : r·x ≤ 0, l·x = 0}` obtained from the dual cone's
    /// generators; exact for polyhedral cones by the involution `C'' = C`.
    pub fn hrep(&self) -> Polyhedron<T> {
        let dual = self.dual();
        let rows = dual
            .generators
            .iter()
            .map(|f| (linalg::neg(f), T::zero()))
            .collect();
        Polyhedron::from_rows(self.dim, rows, vec![])
            .expect("consistent dims")
            .pruned()
    }

    /// The dual cone `{f : f·g ≥ 0 for every generator g}`.
    pub fn dual(&self) -> Self {
        let rows: Vec<(Vec<T>, T)> = self
            .generators
            .iter()
            .map(|g| (linalg::neg(g), T::zero()))
            .collect();
        let hrep = Polyhedron::from_rows(self.dim, rows, vec![]).expect("consistent dims");
        Cone::from_hrep(&hrep).expect("homogeneous by construction")
    }

    /// The H-representation of the dual cone, directly from the generators.
    pub fn dual_hrep(&self) -> Polyhedron<T> {
        let rows: Vec<(Vec<T>, T)> = self
            .generators
            .iter()
            .map(|g| (linalg::neg(g), T::zero()))
            .collect();
        Polyhedron::from_rows(self.dim, rows, vec![]).expect("consistent dims")
    }

    /// Exact membership: is `x` a nonnegative combination of the generators?
    pub fn contains(&self, x: &[T]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: x.len() });
        }
        if linalg::is_zero(x) {
            return Ok(true);
        }
        if self.generators.is_empty() {
            return Ok(false);
        }
        // Feasibility of Σ μ_i g_i = x, μ ≥ 0.
        let k = self.generators.len();
        let mut ineqs = Vec::with_capacity(k);
        for j in 0..k {
            let mut row = vec![T::zero(); k];
            row[j] = -T::one();
            ineqs.push((row, T::zero()));
        }
        let mut eqs = Vec::with_capacity(self.dim);
        for c in 0..self.dim {
            let row: Vec<T> = self.generators.iter().map(|g| g[c].clone()).collect();
            eqs.push((row, x[c].clone()));
        }
        let weights = Polyhedron::from_rows(k, ineqs, eqs)?;
        Ok(!weights.is_empty())
    }

    /// True iff the generators span the whole ambient space (`C − C = ℝ^dim`).
    pub fn is_generating(&self) -> bool {
        linalg::rank(&self.generators) == self.dim
    }

    /// Minkowski sum, computed by generator union.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Cone::from_generators(self.dim, gens)
    }

    /// Image cone `M(C)` under a linear map.
    pub fn linear_image(&self, map: &LinearMap<T>) -> Result<Self> {
        let gens = self
            .generators
            .iter()
            .map(|g| map.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Cone::from_generators(map.rows(), gens)
    }

    /// A core point of the cone (exists iff the cone is full-dimensional).
    pub fn core_point(&self) -> Option<Vec<T>> {
        self.hrep().core_point()
    }
}

fn normalize_direction<T: Scalar>(v: &[T]) -> Vec<T> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let s = T::one() / lead.abs();
            linalg::scale(&s, v)
        }
        None => v.to_vec(),
    }
}

/// The normal cone to `p` at `x`, as the conic hull of the active constraint
/// normals (with ± the equality normals). `Err(NotInSet)` marks the paper's
/// distinguished `N(z; Λ) = ∅` for `z ∉ Λ`.
pub fn normal_cone<T: Scalar>(p: &Polyhedron<T>, x: &[T]) -> Result<Cone<T>> {
    if x.len() != p.dim() {
        return Err(Error::Dimension { expected: p.dim(), got: x.len() });
    }
    if !p.contains(x) {
        return Err(Error::NotInSet);
    }
    let mut gens = Vec::new();
    for i in p.active_ineqs(x) {
        gens.push(p.ineqs()[i].normal.clone());
    }
    for c in p.eqs() {
        gens.push(c.normal.clone());
        gens.push(linalg::neg(&c.normal));
    }
    Cone::from_generators(p.dim(), gens)
}

/// Definitional normal-cone membership: `f·(z − x) ≤ 0` for all `z ∈ p`,
/// i.e. `sup_p f ≤ f·x`. Used as an independent oracle for [`normal_cone`].
pub fn in_normal_cone<T: Scalar>(p: &Polyhedron<T>, x: &[T], f: &[T]) -> Result<bool> {
    match p.maximize(f)? {
        Some((sup, _)) => Ok(sup <= dot(f, x)),
        None => Ok(false),
    }
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
    fn normal_cone_at_vertex() {
        let p = unit_box(2);
        let c = normal_cone(&p, &[q(0, 1), q(0, 1)]).unwrap();
        let expected = Cone::from_generators(
            2,
            vec![vec![q(-1, 1), q(0, 1)], vec![q(0, 1), q(-1, 1)]],
        )
        .unwrap();
        assert!(c.hrep().set_eq(&expected.hrep()).unwrap());
        // Spot-check against the definitional oracle.
        assert!(in_normal_cone(&p, &[q(0, 1), q(0, 1)], &[q(-1, 1), q(-1, 2)]).unwrap());
        assert!(!in_normal_cone(&p, &[q(0, 1), q(0, 1)], &[q(1, 1), q(0, 1)]).unwrap());
    }

    #[test]
    fn normal_cone_at_interior_is_zero() {
        let p = unit_box(2);
        let c = normal_cone(&p, &[q(1, 2), q(1, 2)]).unwrap();
        assert!(c.is_zero_cone());
    }

    #[test]
    fn normal_cone_outside() {
        let p = unit_box(2);
        assert_eq!(normal_cone(&p, &[q(2, 1), q(2, 1)]), Err(Error::NotInSet));
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = Cone::<Q>::orthant(2);
        let d = c.dual();
        assert!(d.hrep().set_eq(&c.hrep()).unwrap());
    }

    #[test]
    fn dual_of_zero_cone_is_everything() {
        let c = Cone::<Q>::zero(2);
        let d = c.dual();
        assert!(d.hrep().set_eq(&Polyhedron::universe(2)).unwrap());
    }

    #[test]
    fn dual_of_single_ray() {
        // dual of ray{(1,1)} is the halfplane {f1 + f2 ≥ 0}.
        let c = Cone::from_generators(2, vec![vec![q(1, 1), q(1, 1)]]).unwrap();
        let d = c.dual();
        let expected = Polyhedron::halfspace(vec![q(-1, 1), q(-1, 1)], q(0, 1));
        assert!(d.hrep().set_eq(&expected).unwrap());
    }

    #[test]
    fn dual_involution() {
        let c = Cone::from_generators(
            3,
            vec![
                vec![q(1, 1), q(0, 1), q(0, 1)],
                vec![q(1, 1), q(2, 1), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(1, 1)],
            ],
        )
        .unwrap();
        let dd = c.dual().dual();
        assert!(dd.hrep().set_eq(&c.hrep()).unwrap());
    }

    #[test]
    fn generating_checks() {
        assert!(Cone::<Q>::orthant(2).is_generating());
        let ray = Cone::from_generators(2, vec![vec![q(1, 1), q(0, 1)]]).unwrap();
        assert!(!ray.is_generating());
        let two = Cone::from_generators(2, vec![vec![q(1, 1), q(0, 1)], vec![q(-1, 1), q(1, 1)]])
            .unwrap();
        assert!(two.is_generating());
    }

    #[test]
    fn membership() {
        let c = Cone::from_generators(2, vec![vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(1, 1)]])
            .unwrap();
        assert!(c.contains(&[q(3, 1), q(1, 1)]).unwrap());
        assert!(c.contains(&[q(0, 1), q(0, 1)]).unwrap());
        assert!(!c.contains(&[q(-1, 1), q(0, 1)]).unwrap());
        assert!(!c.contains(&[q(0, 1), q(1, 1)]).unwrap());
    }

    #[test]
    fn hrep_of_generated_cone_matches_normal_cone() {
        // N((0,0); [0,1]^2) equals cone{(-1,0),(0,-1)} in H-rep.
        let p = unit_box(2);
        let nc = normal_cone(&p, &[q(0, 1), q(0, 1)]).unwrap();
        let gens = Cone::from_generators(
            2,
            vec![vec![q(-1, 1), q(0, 1)], vec![q(0, 1), q(-1, 1)]],
        )
        .unwrap();
        assert!(nc.hrep().set_eq(&gens.hrep()).unwrap());
    }
}
