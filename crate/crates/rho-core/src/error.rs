//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by validation and numeric routines.
///
/// Hot-path scoring functions (kernel evaluation, density evaluation at a
/// point) panic on programmer errors instead of returning `Result`; every
/// construction- or configuration-level failure goes through this enum.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid density parameters: {0}")]
    InvalidDensity(String),

    #[error("density mass {mass} deviates from 1 beyond tolerance {tol}")]
    NotNormalized { mass: f64, tol: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("supports or grids do not match")]
    MismatchedSupport,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lattice would have {count} members, exceeding the cap {cap}")]
    LatticeCap { count: u128, cap: usize },

    #[error("quadrature window excludes mass {0:.3e} (> 1e-6); widen the window or allow the tail bound")]
    WindowExcludesMass(f64),

    #[error("penalties not assigned; call assign_penalties first")]
    PenaltiesUnassigned,

    #[error("kernel weight sum {0} deviates from 1 beyond tolerance 1e-6")]
    WeightSum(f64),

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("data point {value} falls outside the bin grid [{lo}, {hi}]")]
    DataOutsideBins { value: f64, lo: f64, hi: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, CoreError>;
