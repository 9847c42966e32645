use thiserror::Error;

/// Errors raised by the estimation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("sampling times must be strictly increasing (index {index}: {prev} -> {next})")]
    NotIncreasing { index: usize, prev: f64, next: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("metric matrix is not positive definite after regularization (pivot {pivot})")]
    Conditioning { pivot: usize },

    #[error("generalized eigenvalue {value} outside the admissible range [0, 1]")]
    SpectralRange { value: f64 },

    #[error("spline evaluated at {x}, outside [{lo}, {hi}] beyond the edge guard")]
    Extrapolation { x: f64, lo: f64, hi: f64 },

    #[error("plan expects {expected} samples but got {got}")]
    PlanMismatch { expected: usize, got: usize },

    #[error("tapers have no zero-frequency response (sum of squared weights sums = {0:e})")]
    DegenerateTapers(f64),

    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("grid generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, SpecError>;

pub(crate) fn ensure_finite(what: &str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(SpecError::NonFinite(format!("{what}[{i}] = {}", values[i]))),
        None => Ok(()),
    }
}
