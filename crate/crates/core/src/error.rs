use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the computational core.
///
/// Variants fall in two groups: malformed input, and requests that exceed a
/// configured computational cap. [`Error::is_cap`] distinguishes them.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("k = {k} is out of range for n = {n}")]
    OutOfRange { n: usize, k: usize },

    #[error("horizon {requested} exceeds the configured cap {cap}")]
    HorizonExceeded { requested: usize, cap: usize },

    #[error("enumeration of {requested} items exceeds the cap {cap}")]
    EnumerationCap { requested: u128, cap: u128 },

    #[error("shift is empty: no bi-infinite sequence survives pruning")]
    EmptyShift,

    #[error("matrix is malformed: {0}")]
    MalformedMatrix(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("power iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("stationary distribution is not unique")]
    NonUniqueStationary,

    #[error("{0} is not supported")]
    Unsupported(String),
}

impl Error {
    /// True when the error reports a computational cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::HorizonExceeded { .. } | Error::EnumerationCap { .. } | Error::NonConvergence { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
