use thiserror::Error;

/// Errors raised by the computation kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Arguments outside an operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Two routes that must agree did not, or a value that must be an integer was not.
    #[error("integrity failure: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(format!($($arg)*))
    };
}

macro_rules! integrity {
    ($($arg:tt)*) => {
        $crate::error::Error::Integrity(format!($($arg)*))
    };
}

pub(crate) use integrity;
pub(crate) use invalid;
