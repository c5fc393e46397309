use alloc::string::String;
use core::fmt;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller supplied input that violates a precondition.
    Rejected,
    /// The inputs are individually valid but contradict each other, or an
    /// internal cross-check failed.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    Rejected(String),
    Inconsistent(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch { .. } | Error::Rejected(_) => ErrorKind::Rejected,
            Error::Inconsistent(_) => ErrorKind::Inconsistent,
        }
    }

    pub(crate) fn rejected(msg: impl Into<String>) -> Self {
        Error::Rejected(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Rejected(msg) => write!(f, "rejected input: {msg}"),
            Error::Inconsistent(msg) => write!(f, "inconsistent data: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
