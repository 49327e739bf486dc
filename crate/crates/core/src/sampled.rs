//! Grid sampling of convex expressions: the float oracle substrate.
//!
//! Grid coordinates stay exact rationals; sampled values are `f64` with
//! `f64::INFINITY` as the out-of-domain sentinel. This is the only layer of
//! the crate where floating point appears.

use crate::expr::ConvexExpr;
use crate::report::ExtReal;
use crate::scalar::Scalar;
use crate::{Error, Q, Result};

/// A 1-D or 2-D grid `origin + i·spacing` per axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    origin: Vec<Q>,
    spacing: Vec<Q>,
    counts: Vec<usize>,
}

impl GridSpec {
    pub fn new(origin: Vec<Q>, spacing: Vec<Q>, counts: Vec<usize>) -> Result<Self> {
        let d = origin.len();
        if d == 0 || d > 2 || spacing.len() != d || counts.len() != d {
            return Err(Error::Invalid("grids are 1-D or 2-D with matching axis data"));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::EmptyGrid);
        }
        if spacing.iter().any(|s| *s <= Q::int(0)) {
            return Err(Error::Invalid("grid spacing must be positive"));
        }
        Ok(Self { origin, spacing, counts })
    }

    /// 1-D grid `lo, lo+h, …` with `count` points.
    pub fn line(lo: Q, h: Q, count: usize) -> Result<Self> {
        Self::new(vec![lo], vec![h], vec![count])
    }

    /// Symmetric 1-D grid covering `[-radius, radius]` with spacing `h`.
    pub fn symmetric(radius: Q, h: Q) -> Result<Self> {
        let count = ((radius.clone() + radius.clone()) / h.clone())
            .to_f64_lossy()
            .round() as usize
            + 1;
        Self::line(-radius, h, count)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn spacing(&self) -> &[Q] {
        &self.spacing
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coord(&self, axis: usize, i: usize) -> Q {
        self.origin[axis].clone() + Q::int(i as i64) * self.spacing[axis].clone()
    }

    /// Coordinates along one axis.
    pub fn axis(&self, axis: usize) -> Vec<Q> {
        (0..self.counts[axis]).map(|i| self.coord(axis, i)).collect()
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> Vec<Vec<Q>> {
        match self.dim() {
            1 => self.axis(0).into_iter().map(|x| vec![x]).collect(),
            2 => {
                let xs = self.axis(0);
                let ys = self.axis(1);
                let mut out = Vec::with_capacity(xs.len() * ys.len());
                for x in &xs {
                    for y in &ys {
                        out.push(vec![x.clone(), y.clone()]);
                    }
                }
                out
            }
            _ => unreachable!("validated at construction"),
        }
    }
}

/// Float samples of a convex function on a grid; `+∞` marks points outside
/// the domain. At least one value is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), got: values.len() });
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::Invalid("sampled function needs a finite value"));
        }
        Ok(Self { grid, values })
    }

    pub fn value_1d(&self, i: usize) -> f64 {
        self.values[i]
    }
}

/// Samples `f` on `grid` with exact evaluation before the final rounding.
pub fn sample(f: &ConvexExpr<Q>, grid: &GridSpec) -> Result<SampledFunction> {
    if f.dim() != grid.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: grid.dim() });
    }
    let mut values = Vec::with_capacity(grid.len());
    for p in grid.points() {
        let v = match f.eval(&p)? {
            ExtReal::Finite(v) => v.to_f64_lossy(),
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::NegInf => unreachable!("proper expressions never evaluate to -inf"),
        };
        values.push(v);
    }
    SampledFunction::from_values(grid.clone(), values)
}
