use thiserror::Error;

/// Errors raised by window evaluation, operator construction and numerics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("window pole hit at t = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("shift {shift} is not aligned with grid step {step}")]
    Misaligned { shift: f64, step: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("support of the test function exceeds the truncation window: {0}")]
    SupportExceeded(String),

    #[error("iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },

    #[error("matrix is not positive definite after regularisation")]
    NotPositiveDefinite,

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
