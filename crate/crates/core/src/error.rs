use thiserror::Error;

pub type Result<T> = std::result::Result<T, ItcError>;

/// Errors raised by the chain, spectral, and metric computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ItcError {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("spin index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NotConverged { index: usize, iterations: usize },

    #[error("p_max({i},{j}) = {value} exceeds 1 by more than the rounding allowance")]
    ProbabilityExcess { i: usize, j: usize, value: f64 },

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl ItcError {
    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        ItcError::InvalidArgument(msg.into())
    }
}
