use thiserror::Error;

/// Errors raised by the model, solver and scaling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its admissible range (bad input, not physics).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A physical validity condition is violated, e.g. a radicand of a
    /// closed-form result went negative.
    #[error("{condition} violated: {detail}")]
    Domain {
        condition: &'static str,
        detail: String,
    },

    #[error("Hilbert space dimension {dim} exceeds the configured limit {limit}")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "eigensolver did not converge after {iterations} iterations (residual {residual:.3e})"
    )]
    NotConverged { iterations: usize, residual: f64 },

    /// The quasi-bound state of the quartic well leaks into the box walls.
    #[error(
        "universal functions unresolved at eta = {eta}: boundary weight {boundary_weight:.3e}"
    )]
    Unresolved { eta: f64, boundary_weight: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn domain(condition: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            condition,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the caller's input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Domain { .. }
                | Error::DimensionOverflow { .. }
                | Error::DimensionMismatch { .. }
                | Error::InsufficientData(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
