//! Dense exact linear algebra on `Vec<T>` vectors and the [`LinearMap`] type.
//!
//! Vectors are plain `Vec<T>`; the free functions here keep call sites terse.
//! Everything is exact: Gaussian elimination is the only "numerical" routine
//! and it runs over the field `T`.

use crate::scalar::Scalar;
use crate::{Error, Result};

pub fn zeros<T: Scalar>(n: usize) -> Vec<T> {
    vec![T::zero(); n]
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn neg<T: Scalar>(a: &[T]) -> Vec<T> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn scale<T: Scalar>(c: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

/// `a + c * b`.
pub fn axpy<T: Scalar>(a: &[T], c: &T, b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + c.clone() * y.clone())
        .collect()
}

pub fn is_zero<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Standard basis vector `e_i` in dimension `n`.
pub fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = zeros(n);
    v[i] = T::one();
    v
}

/// A rational matrix acting as `x ↦ M x`, with the adjoint given by the
/// transpose.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>, // row-major
}

impl<T: Scalar> LinearMap<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension { expected: c, got: 0 });
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = zeros(n * n);
        for i in 0..n {
            entries[i * n + i] = T::one();
        }
        Self { rows: n, cols: n, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: zeros(rows * cols) }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, got: x.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// The adjoint (transpose) map.
    pub fn adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: Scalar>(rows: &mut Vec<Vec<T>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        rows[r] = scale(&inv, &rows[r]);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = -rows[i][c].clone();
                rows[i] = axpy(&rows[i], &f, &rows[r]);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.retain(|row| !is_zero(row));
    pivots
}

/// Rank of the span of the given vectors.
pub fn rank<T: Scalar>(vectors: &[Vec<T>]) -> usize {
    let mut rows: Vec<Vec<T>> = vectors.to_vec();
    rref(&mut rows).len()
}

/// Basis of the kernel of the matrix whose rows are `rows` (dimension `n`).
pub fn kernel_basis<T: Scalar>(rows: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = zeros(n);
        v[fc] = T::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the square-ish system given by `rows * x = rhs` when the solution
/// is unique; returns `None` when the system is inconsistent or
/// underdetermined.
pub fn solve_unique<T: Scalar>(rows: &[Vec<T>], rhs: &[T], n: usize) -> Option<Vec<T>> {
    let mut aug: Vec<Vec<T>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent iff a pivot lands in the rhs column.
    if pivots.last() == Some(&n) {
        return None;
    }
    if pivots.len() != n {
        return None;
    }
    let mut x = zeros(n);
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    #[test]
    fn adjoint_involution() {
        let m = LinearMap::from_rows(vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(0, 1), q(-1, 2), q(5, 1)],
        ])
        .unwrap();
        assert_eq!(m.adjoint().adjoint(), m);
        assert_eq!(m.adjoint().rows(), 3);
    }

    #[test]
    fn adjoint_pairing() {
        // <A x, y> = <x, A* y>
        let a = LinearMap::from_rows(vec![vec![q(2, 1), q(1, 3)], vec![q(-1, 1), q(4, 1)]]).unwrap();
        let x = vec![q(1, 2), q(3, 1)];
        let y = vec![q(-2, 1), q(1, 5)];
        assert_eq!(
            dot(&a.apply(&x).unwrap(), &y),
            dot(&x, &a.adjoint().apply(&y).unwrap())
        );
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
        ];
        assert_eq!(rank(&rows), 1);
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&rows[0], v), q(0, 1));
        }
    }

    #[test]
    fn unique_solve() {
        let rows = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]];
        let x = solve_unique(&rows, &[q(3, 1), q(1, 1)], 2).unwrap();
        assert_eq!(x, vec![q(2, 1), q(1, 1)]);
        // Underdetermined.
        assert!(solve_unique(&rows[..1], &[q(3, 1)], 2).is_none());
        // Inconsistent.
        let rows2 = vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        assert!(solve_unique(&rows2, &[q(1, 1), q(3, 1)], 2).is_none());
    }
}
