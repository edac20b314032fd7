//! Error type shared by all modules.

/// Errors reported by the library.
///
/// `Exceptional` and `WrongChart` are recoverable conditions with meaning of
/// their own (the caller picked a number of absolute value one, or asked for
/// the wrong affine chart); the others are plain usage or capacity errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The rational has archimedean absolute value one (q = 1 or q = -1) and
    /// induces no map of curves.
    #[error("exceptional number: {0}")]
    Exceptional(String),

    /// Input too large for the deterministic factorization backend.
    #[error("magnitude limit exceeded: {0}")]
    MagnitudeLimit(String),

    /// The requested prime lies outside the current affine chart; the other
    /// chart covers it.
    #[error("wrong chart: {0}")]
    WrongChart(String),

    /// Operation not defined for this input shape.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal consistency check failed. Always a bug.
    #[error("internal invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
