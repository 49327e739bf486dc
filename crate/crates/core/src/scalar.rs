//! Scalar abstraction for the exact kernel.
//!
//! Every geometric and duality computation in this crate runs over an
//! arbitrary totally ordered field. The blanket [`Scalar`] trait collects the
//! bounds we need from `num-traits`; `Ratio<BigInt>` and `Ratio<i64>` both
//! satisfy it. Floating point types do not (no total order, no exact
//! arithmetic) and are deliberately confined to the grid oracles in
//! [`crate::sampled`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{FromPrimitive, Num, Signed};

/// An exact, totally ordered field scalar.
pub trait Scalar:
    Num + Signed + Ord + Clone + Hash + Debug + Display + FromPrimitive + 'static
{
    /// Builds the scalar `num / den`. Panics when `den == 0`.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let n = Self::from_i64(num).expect("representable numerator");
        let d = Self::from_i64(den).expect("representable denominator");
        n / d
    }

    /// Builds the scalar `n`.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("representable integer")
    }

    /// Best-effort conversion to `f64`, used only when handing values to the
    /// floating-point oracle layer.
    fn to_f64_lossy(&self) -> f64;
}

impl<T> Scalar for T
where
    T: Num
        + Signed
        + Ord
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + num_traits::ToPrimitive
        + 'static,
{
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn ratio_constructors() {
        assert_eq!(Q::ratio(1, 2) + Q::ratio(1, 2), Q::int(1));
        assert_eq!(Q::ratio(-3, 6), Q::ratio(-1, 2));
        assert!(Q::ratio(1, 3) > Q::ratio(1, 4));
    }

    #[test]
    fn lossy_f64() {
        assert_eq!(Q::ratio(1, 4).to_f64_lossy(), 0.25);
    }
}
