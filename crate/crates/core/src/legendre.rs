//! Discrete Legendre–Fenchel transforms of 1-D samples.
//!
//! [`lf_transform_brute`] is the oracle of record: `g*(s_j) = max_i (s_j·x_i
//! − g(x_i))` by full scan, ties to the lowest index. [`lf_transform_fast`]
//! walks a single argmax pointer across the sorted dual grid, which is valid
//! because for convex samples the slope sequence is nondecreasing, so the
//! leftmost argmax is monotone in the dual variable.
//!
//! Both transforms decide every comparison exactly: the floats are lifted to
//! rationals when a floating-point filter cannot certify the sign. The
//! emitted value is the same `f64` expression from the same argmax index, so
//! the two transforms agree bit for bit whenever the fast one accepts its
//! input.

use std::cmp::Ordering;

use num_traits::FromPrimitive;

use crate::sampled::{GridSpec, SampledFunction};
use crate::scalar::Scalar;
use crate::{Error, Q, Result};

struct Axis {
    xs_f: Vec<f64>,
    xs_q: Vec<Q>,
    gs_f: Vec<f64>,
}

fn prepare(g: &SampledFunction, dual: &GridSpec) -> Result<(Axis, Vec<f64>, Vec<Q>)> {
    if g.grid.dim() != 1 || dual.dim() != 1 {
        return Err(Error::Invalid("Legendre transforms operate on 1-D grids"));
    }
    let xs_q = g.grid.axis(0);
    let xs_f: Vec<f64> = xs_q.iter().map(|x| x.to_f64_lossy()).collect();
    let ss_q = dual.axis(0);
    let ss_f: Vec<f64> = ss_q.iter().map(|s| s.to_f64_lossy()).collect();
    Ok((Axis { xs_f, xs_q, gs_f: g.values.clone() }, ss_f, ss_q))
}

fn rat(f: f64) -> Q {
    Q::from_f64(f).expect("finite float is rational")
}

/// Exact sign of `(s·x_i − g_i) − (s·x_k − g_k)`, with a float filter.
fn cmp_candidates(axis: &Axis, s_f: f64, s_q: &Q, i: usize, k: usize) -> Ordering {
    let pi = s_f * axis.xs_f[i];
    let pk = s_f * axis.xs_f[k];
    let vi = pi - axis.gs_f[i];
    let vk = pk - axis.gs_f[k];
    let err = (pi.abs() + vi.abs() + pk.abs() + vk.abs()) * 4.0 * f64::EPSILON;
    if (vi - vk).abs() > err {
        return vi.partial_cmp(&vk).expect("finite filter values");
    }
    let exact_i = s_q.clone() * axis.xs_q[i].clone() - rat(axis.gs_f[i]);
    let exact_k = s_q.clone() * axis.xs_q[k].clone() - rat(axis.gs_f[k]);
    exact_i.cmp(&exact_k)
}

fn emit(axis: &Axis, s_f: f64, idx: usize) -> f64 {
    s_f * axis.xs_f[idx] - axis.gs_f[idx]
}

/// Brute-force discrete conjugate: `O(M·N)`, lowest index wins ties.
pub fn lf_transform_brute(g: &SampledFunction, dual: &GridSpec) -> Result<SampledFunction> {
    let (axis, ss_f, ss_q) = prepare(g, dual)?;
    let finite: Vec<usize> = (0..axis.gs_f.len()).filter(|&i| axis.gs_f[i].is_finite()).collect();
    let mut out = Vec::with_capacity(ss_f.len());
    for (j, &s_f) in ss_f.iter().enumerate() {
        let mut best = finite[0];
        for &i in &finite[1..] {
            if cmp_candidates(&axis, s_f, &ss_q[j], i, best) == Ordering::Greater {
                best = i;
            }
        }
        out.push(emit(&axis, s_f, best));
    }
    SampledFunction::from_values(dual.clone(), out)
}

/// Linear-time discrete conjugate for convex samples. Validates that the
/// finite window is contiguous and the slopes are nondecreasing (exactly);
/// otherwise returns [`Error::NonConvexSamples`]. Output is bit-identical to
/// [`lf_transform_brute`] on the same grids.
pub fn lf_transform_fast(g: &SampledFunction, dual: &GridSpec) -> Result<SampledFunction> {
    let (axis, ss_f, ss_q) = prepare(g, dual)?;
    let n = axis.gs_f.len();
    let lo = (0..n).find(|&i| axis.gs_f[i].is_finite()).expect("one finite sample");
    let hi = (0..n).rfind(|&i| axis.gs_f[i].is_finite()).expect("one finite sample");
    if (lo..=hi).any(|i| !axis.gs_f[i].is_finite()) {
        return Err(Error::NonConvexSamples);
    }
    // Exact slope monotonicity over the finite window.
    let slope = |i: usize| -> Q {
        (rat(axis.gs_f[i + 1]) - rat(axis.gs_f[i]))
            / (axis.xs_q[i + 1].clone() - axis.xs_q[i].clone())
    };
    for i in lo..hi.saturating_sub(1) {
        if slope(i) > slope(i + 1) {
            return Err(Error::NonConvexSamples);
        }
    }

    let mut out = Vec::with_capacity(ss_f.len());
    let mut ptr = lo;
    for (j, &s_f) in ss_f.iter().enumerate() {
        while ptr < hi
            && cmp_candidates(&axis, s_f, &ss_q[j], ptr + 1, ptr) == Ordering::Greater
        {
            ptr += 1;
        }
        out.push(emit(&axis, s_f, ptr));
    }
    SampledFunction::from_values(dual.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ConvexExpr;
    use crate::sampled::sample;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn abs_samples() -> SampledFunction {
        let grid = GridSpec::symmetric(q(2, 1), q(1, 64)).unwrap();
        sample(&ConvexExpr::abs1(), &grid).unwrap()
    }

    #[test]
    fn conjugate_of_abs_at_zero() {
        let g = abs_samples();
        let dual = GridSpec::line(q(0, 1), q(1, 1), 1).unwrap();
        let out = lf_transform_brute(&g, &dual).unwrap();
        assert_eq!(out.values, vec![0.0]);
    }

    #[test]
    fn conjugate_of_zero_function() {
        let grid = GridSpec::symmetric(q(1, 1), q(1, 64)).unwrap();
        let g = sample(&ConvexExpr::zero(1), &grid).unwrap();
        let dual = GridSpec::line(q(1, 1), q(1, 1), 1).unwrap();
        let out = lf_transform_brute(&g, &dual).unwrap();
        // sup_{x in [-1,1]} x·1 = 1.
        assert_eq!(out.values, vec![1.0]);
    }

    #[test]
    fn grid_truncation_outside_slope_range() {
        // |x| sampled on [-2,2]: dual point 2 sees the grid-truncated value
        // 2·2 − 2 = 2 rather than the true conjugate +∞.
        let g = abs_samples();
        let dual = GridSpec::line(q(2, 1), q(1, 1), 1).unwrap();
        let out = lf_transform_brute(&g, &dual).unwrap();
        assert_eq!(out.values, vec![2.0]);
    }

    #[test]
    fn fast_equals_brute_on_abs() {
        let g = abs_samples();
        let dual = GridSpec::symmetric(q(3, 1), q(1, 32)).unwrap();
        let brute = lf_transform_brute(&g, &dual).unwrap();
        let fast = lf_transform_fast(&g, &dual).unwrap();
        for (a, b) in brute.values.iter().zip(&fast.values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn fast_equals_brute_with_domain_holes() {
        // Indicator of [0,1] plus a slope: infinite sentinels at both ends.
        let seg = crate::poly::Polyhedron::box_(&[q(0, 1)], &[q(1, 1)]).unwrap();
        let f = ConvexExpr::sum(
            ConvexExpr::affine(vec![q(1, 2)], q(0, 1)),
            ConvexExpr::indicator(seg).unwrap(),
        )
        .unwrap();
        let grid = GridSpec::symmetric(q(2, 1), q(1, 16)).unwrap();
        let g = sample(&f, &grid).unwrap();
        let dual = GridSpec::symmetric(q(2, 1), q(1, 8)).unwrap();
        let brute = lf_transform_brute(&g, &dual).unwrap();
        let fast = lf_transform_fast(&g, &dual).unwrap();
        assert_eq!(brute.values, fast.values);
    }

    #[test]
    fn fast_rejects_nonconvex() {
        let grid = GridSpec::line(q(0, 1), q(1, 1), 3).unwrap();
        let g = SampledFunction::from_values(grid, vec![0.0, 1.0, 0.0]).unwrap();
        let dual = GridSpec::line(q(0, 1), q(1, 1), 1).unwrap();
        assert_eq!(lf_transform_fast(&g, &dual), Err(Error::NonConvexSamples));
        // Brute has no convexity precondition.
        assert!(lf_transform_brute(&g, &dual).is_ok());
    }

    #[test]
    fn exact_tie_breaks_to_lowest_index() {
        // g ≡ 0 on {0, 1}: at s = 0 both candidates tie; index 0 must win in
        // both transforms.
        let grid = GridSpec::line(q(0, 1), q(1, 1), 2).unwrap();
        let g = SampledFunction::from_values(grid, vec![0.0, 0.0]).unwrap();
        let dual = GridSpec::line(q(0, 1), q(1, 1), 1).unwrap();
        let brute = lf_transform_brute(&g, &dual).unwrap();
        let fast = lf_transform_fast(&g, &dual).unwrap();
        assert_eq!(brute.values, vec![0.0]);
        assert_eq!(fast.values, vec![0.0]);
    }
}
