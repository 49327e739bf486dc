//! Extended-real values and duality reports.

use std::fmt;
use std::ops::Add;

use crate::scalar::Scalar;

/// Extended real line. Proper convex data never produces `NegInf` from
/// evaluation or support functions; it appears only as an optimal value
/// (unbounded minimization).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtReal<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T: Scalar> ExtReal<T> {
    pub fn finite(v: T) -> Self {
        ExtReal::Finite(v)
    }

    pub fn zero() -> Self {
        ExtReal::Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&T> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn unwrap_finite(self) -> T {
        match self {
            ExtReal::Finite(v) => v,
            other => panic!("expected finite value, got {other:?}"),
        }
    }

    pub fn neg(self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }

    /// Scales by a nonnegative factor, with `0 · (±∞) = ±∞` kept infinite:
    /// scaling a function by zero preserves its domain here.
    pub fn scale_nonneg(self, factor: &T) -> Self {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(factor.clone() * v),
            inf => inf,
        }
    }

    pub fn to_f64_lossy(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v.to_f64_lossy(),
            ExtReal::PosInf => f64::INFINITY,
        }
    }
}

impl<T: Scalar> Add for ExtReal<T> {
    type Output = ExtReal<T>;

    /// `+∞ + (−∞)` is undefined and panics; proper data never reaches it.
    fn add(self, rhs: Self) -> Self {
        use ExtReal::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                panic!("undefined extended-real sum (+inf) + (-inf)")
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }
}

impl<T: Scalar> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}

/// Outcome of a primal/dual solve pair, with the qualification bookkeeping
/// needed to decide whether the strong-duality theorem applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport<T> {
    pub primal_value: ExtReal<T>,
    pub dual_value: ExtReal<T>,
    /// `primal − dual` when both are finite.
    pub gap: Option<T>,
    pub primal_opt: Option<Vec<T>>,
    pub dual_opt: Option<Vec<T>>,
    /// Named qualification checks and whether each held.
    pub qualifications: Vec<(&'static str, bool)>,
    /// The strong-duality hypotheses of the governing theorem hold.
    pub qualified: bool,
    /// Slater condition, where meaningful.
    pub slater: Option<bool>,
    /// The dual optimum is attained by `dual_opt` exactly.
    pub attained: bool,
}

impl<T: Scalar> DualityReport<T> {
    pub fn weak_duality_holds(&self) -> bool {
        self.primal_value >= self.dual_value
    }

    pub fn zero_gap(&self) -> bool {
        self.primal_value == self.dual_value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn ordering() {
        let a: ExtReal<Q> = ExtReal::NegInf;
        let b = ExtReal::Finite(Q::int(-100));
        let c = ExtReal::Finite(Q::int(3));
        let d: ExtReal<Q> = ExtReal::PosInf;
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn arithmetic() {
        let two = ExtReal::Finite(Q::int(2));
        let three = ExtReal::Finite(Q::int(3));
        assert_eq!(two.clone() + three, ExtReal::Finite(Q::int(5)));
        assert_eq!(two + ExtReal::PosInf, ExtReal::PosInf);
        assert_eq!(
            ExtReal::Finite(Q::int(1)).scale_nonneg(&Q::int(0)),
            ExtReal::Finite(Q::int(0))
        );
        assert_eq!(ExtReal::<Q>::PosInf.scale_nonneg(&Q::int(0)), ExtReal::PosInf);
    }
}
