//! V-representation of polyhedra at small dimensions.
//!
//! [`vrep`] enumerates one point per minimal face, the extreme rays of the
//! recession cone, and a lineality basis, by brute-force active-set
//! enumeration after splitting off the lineality space. Intended for the
//! low-dimensional sets this crate manipulates (subdifferentials, epigraphs,
//! normal cones in dimension ≤ 5 or so); the combinatorial enumeration is
//! exact but not meant for large instances.
//!
//! [`GeneratedSet`] goes the other way: points and rays back to an H-rep via
//! Fourier–Motzkin elimination of the combination weights.

use crate::linalg;
use crate::poly::Polyhedron;
use crate::scalar::Scalar;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep<T> {
    /// One representative point per minimal face (the vertices when the
    /// polyhedron is pointed). Empty iff the polyhedron is empty.
    pub points: Vec<Vec<T>>,
    /// Extreme rays of the recession cone, modulo lineality.
    pub rays: Vec<Vec<T>>,
    /// Basis of the lineality space.
    pub lineality: Vec<Vec<T>>,
}

impl<T: Scalar> VRep<T> {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All recession generators: rays plus ± lineality basis vectors.
    pub fn recession_generators(&self) -> Vec<Vec<T>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(linalg::neg(l));
        }
        out
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

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerates the V-representation of `p`.
pub fn vrep<T: Scalar>(p: &Polyhedron<T>) -> Result<VRep<T>> {
    if p.is_empty() {
        return Ok(VRep { points: vec![], rays: vec![], lineality: vec![] });
    }
    let n = p.dim();
    if n == 0 {
        return Ok(VRep { points: vec![vec![]], rays: vec![], lineality: vec![] });
    }

    // Lineality = kernel of every constraint normal.
    let all_normals: Vec<Vec<T>> = p
        .ineqs()
        .iter()
        .chain(p.eqs().iter())
        .map(|c| c.normal.clone())
        .collect();
    let lineality = linalg::kernel_basis(&all_normals, n);

    if !lineality.is_empty() {
        // Split coordinates: x = W y + L z with W unit vectors completing L.
        let unit_cols = complete_basis(&lineality, n);
        let reduce = |normal: &[T]| -> Vec<T> {
            unit_cols.iter().map(|&i| normal[i].clone()).collect()
        };
        let reduced = Polyhedron::from_rows(
            unit_cols.len(),
            p.ineqs().iter().map(|c| (reduce(&c.normal), c.offset.clone())).collect(),
            p.eqs().iter().map(|c| (reduce(&c.normal), c.offset.clone())).collect(),
        )?;
        let inner = vrep(&reduced)?;
        let lift = |y: &[T]| -> Vec<T> {
            let mut x = vec![T::zero(); n];
            for (k, &i) in unit_cols.iter().enumerate() {
                x[i] = y[k].clone();
            }
            x
        };
        return Ok(VRep {
            points: inner.points.iter().map(|y| lift(y)).collect(),
            rays: inner.rays.iter().map(|y| lift(y)).collect(),
            lineality,
        });
    }

    // Pointed case: vertices have n independent active rows.
    let eq_rows: Vec<Vec<T>> = p.eqs().iter().map(|c| c.normal.clone()).collect();
    let eq_rhs: Vec<T> = p.eqs().iter().map(|c| c.offset.clone()).collect();
    let r0 = linalg::rank(&eq_rows);
    let m = p.ineqs().len();

    let mut points: Vec<Vec<T>> = Vec::new();
    if r0 <= n {
        for combo in combinations(m, n - r0) {
            let mut rows = eq_rows.clone();
            let mut rhs = eq_rhs.clone();
            for &i in &combo {
                rows.push(p.ineqs()[i].normal.clone());
                rhs.push(p.ineqs()[i].offset.clone());
            }
            if let Some(x) = linalg::solve_unique(&rows, &rhs, n) {
                if p.contains(&x) && !points.contains(&x) {
                    points.push(x);
                }
            }
        }
    }
    debug_assert!(!points.is_empty(), "nonempty pointed polyhedron has a vertex");

    // Extreme rays of the recession cone: n-1 independent active rows.
    let mut rays: Vec<Vec<T>> = Vec::new();
    if n >= 1 && r0 + 1 <= n {
        for combo in combinations(m, n - 1 - r0) {
            let mut rows = eq_rows.clone();
            for &i in &combo {
                rows.push(p.ineqs()[i].normal.clone());
            }
            let kernel = linalg::kernel_basis(&rows, n);
            if kernel.len() != 1 {
                continue;
            }
            for cand in [kernel[0].clone(), linalg::neg(&kernel[0])] {
                if p.contains_direction(&cand) {
                    let d = normalize_direction(&cand);
                    if !rays.contains(&d) {
                        rays.push(d);
                    }
                }
            }
        }
    }
    points.sort();
    rays.sort();
    Ok(VRep { points, rays, lineality })
}

/// Unit coordinate indices completing `partial` to a basis of `ℝ^n`.
fn complete_basis<T: Scalar>(partial: &[Vec<T>], n: usize) -> Vec<usize> {
    let mut current: Vec<Vec<T>> = partial.to_vec();
    let mut chosen = Vec::new();
    let mut r = linalg::rank(&current);
    for i in 0..n {
        if r == n {
            break;
        }
        let mut trial = current.clone();
        trial.push(linalg::unit(n, i));
        let tr = linalg::rank(&trial);
        if tr > r {
            current = trial;
            r = tr;
            chosen.push(i);
        }
    }
    chosen
}

/// A set generated as `co(points) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedSet<T> {
    pub dim: usize,
    pub points: Vec<Vec<T>>,
    pub rays: Vec<Vec<T>>,
}

impl<T: Scalar> GeneratedSet<T> {
    pub fn new(dim: usize, points: Vec<Vec<T>>, rays: Vec<Vec<T>>) -> Self {
        Self { dim, points, rays }
    }

    pub fn from_vrep(dim: usize, v: &VRep<T>) -> Self {
        Self { dim, points: v.points.clone(), rays: v.recession_generators() }
    }

    /// Exact H-representation, by eliminating the combination weights:
    /// `x = Σ λ_i p_i + Σ μ_j r_j`, `Σ λ = 1`, `λ, μ ≥ 0`.
    pub fn to_hrep(&self) -> Result<Polyhedron<T>> {
        if self.points.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let n = self.dim;
        let k = self.points.len();
        let r = self.rays.len();
        let total = n + k + r;
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for j in 0..k + r {
            let mut row = vec![T::zero(); total];
            row[n + j] = -T::one();
            ineqs.push((row, T::zero()));
        }
        for c in 0..n {
            let mut row = vec![T::zero(); total];
            row[c] = T::one();
            for (j, pnt) in self.points.iter().enumerate() {
                row[n + j] = -pnt[c].clone();
            }
            for (j, ray) in self.rays.iter().enumerate() {
                row[n + k + j] = -ray[c].clone();
            }
            eqs.push((row, T::zero()));
        }
        let mut conv = vec![T::zero(); total];
        for j in 0..k {
            conv[n + j] = T::one();
        }
        eqs.push((conv, T::one()));
        let lifted = Polyhedron::from_rows(total, ineqs, eqs)?;
        lifted.project(&(0..n).collect::<Vec<_>>())
    }
}
