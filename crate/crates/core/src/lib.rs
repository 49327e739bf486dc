//! Exact convex-analysis toolkit on polyhedral data.
//!
//! The crate provides an exact-rational polyhedral kernel (LP solving,
//! normal/dual cones, Fourier–Motzkin projection, set equality), a
//! piecewise-linear convex function algebra with exact domains and epigraphs,
//! Fenchel conjugate calculus with attainment witnesses, subdifferential sum
//! and max rules, Fenchel and Lagrange duality with qualification reporting,
//! and coderivative calculus for polyhedral set-valued maps. Floating point
//! appears only in the grid-sampling oracles of [`sampled`] and [`legendre`];
//! every other computation is exact over a totally ordered field scalar.
//!
//! The kernel is generic over [`scalar::Scalar`]; the alias [`Q`]
//! (`Ratio<BigInt>`) is the instantiation the higher layers and the CLI use.

pub mod coderivative;
pub mod cone;
pub mod conjugate;
pub mod expr;
pub mod fenchel;
pub mod lagrange;
pub mod legendre;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod report;
pub mod sampled;
pub mod scalar;
pub mod subdiff;
pub mod vrep;

/// Concrete scalar used throughout the CLI and the test suites: arbitrary
/// precision rationals.
pub type Q = num_rational::BigRational;

pub type QPolyhedron = poly::Polyhedron<Q>;
pub type QCone = cone::Cone<Q>;
pub type QLinearMap = linalg::LinearMap<Q>;
pub type QExpr = expr::ConvexExpr<Q>;
pub type QExtReal = report::ExtReal<Q>;

/// Errors shared by the whole kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("empty set given to {0}")]
    EmptyInput(&'static str),
    #[error("point is not in the set")]
    NotInSet,
    #[error("point is not in the domain")]
    NotInDomain,
    #[error("point is not in the graph")]
    NotInGraph,
    #[error("qualification condition failed: {0}")]
    Qualification(&'static str),
    #[error("Slater condition fails")]
    Slater,
    #[error("value is unbounded")]
    Unbounded,
    #[error("improper function: {0}")]
    Improper(&'static str),
    #[error("no preimage under the adjoint map")]
    NoPreimage,
    #[error("samples are not convex along an axis")]
    NonConvexSamples,
    #[error("empty sampling grid")]
    EmptyGrid,
    #[error("dual vector is not in the dual cone")]
    NotInDualCone,
    #[error("invalid construction: {0}")]
    Invalid(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
