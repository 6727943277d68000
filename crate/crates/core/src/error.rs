//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by series handling, parametrization, estimation and
/// forecasting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series of length {n} is not a whole number of years of period {period}, or does not start at season 1")]
    IncompleteYear { n: usize, period: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("season {season} out of range 1..={period}")]
    SeasonOutOfRange { season: usize, period: usize },

    #[error("a zero eigenvalue has no seed extension; zero eigenvalues take standard basis eigenvectors")]
    ZeroEigenvalue,

    #[error("similarity matrix is singular; seed vectors and basis columns do not span the space")]
    SingularSimilarity,

    #[error("seed vector entry {index} is zero")]
    ZeroSeedEntry { index: usize },

    #[error("per-season linear system is singular at season {season}")]
    SingularSystem { season: usize },

    #[error("degenerate seed vectors: {0}")]
    DegenerateSeeds(String),

    #[error("period mismatch: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },

    #[error("series too short: need more than {min} observations, got {got}")]
    SeriesTooShort { min: usize, got: usize },

    #[error("coefficients are not periodically stationary (largest eigenvalue modulus {max_modulus})")]
    NonStationaryCoefficients { max_modulus: f64 },

    #[error("insufficient data: need at least {min} observations, got {got}")]
    InsufficientData { min: usize, got: usize },

    #[error("collinear lag regressors at season {season}")]
    CollinearLags { season: usize },

    #[error("optimizer failed: {0}")]
    OptimizerFailed(String),

    #[error("model fit failed: {0}")]
    FitFailed(String),

    #[error("degenerate variance at season {season}")]
    DegenerateVariance { season: usize },

    #[error("alignment error: {0}")]
    AlignmentError(String),

    #[error("autoregressive order {p} exceeds period {period}")]
    OrderTooHigh { p: usize, period: usize },

    #[error("insufficient history: need {min} trailing observations, got {got}")]
    InsufficientHistory { min: usize, got: usize },

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
