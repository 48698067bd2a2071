use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A grid or basis is too small for the requested accuracy.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// An index beyond the range where the computed spectrum can be trusted.
    #[error("index {index} is beyond the trusted range (trusted up to {trusted})")]
    UntrustedIndex { index: usize, trusted: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
