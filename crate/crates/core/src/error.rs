//! Error type shared across the library.

/// Errors reported by library operations.
///
/// `Config`-class errors (bad parameters, unusable profile, window violations)
/// are distinguished from `SizeGuard`, which trips when a Monte Carlo request
/// would exceed the state-vector memory budget.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("profile cannot be evaluated pointwise: {0}")]
    ProfileNotEvaluable(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("outside validity window: {0}")]
    OutsideWindow(String),
    #[error("undefined at the critical ratio r = 1/2")]
    CriticalRatio,
    #[error("state-vector size guard: q^(2L) = {size} exceeds the limit 2^24")]
    SizeGuard { size: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
