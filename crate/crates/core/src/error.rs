use thiserror::Error;

/// Errors raised by the numerical routines and the command layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An intermediate quantity left the representable f64 range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A quadrature or refinement study failed to settle within tolerance.
    #[error("under-resolved: {0}")]
    Unresolved(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
