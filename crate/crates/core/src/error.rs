//! Crate-wide error type.
//!
//! Errors are split by how callers recover from them: `Validation` for bad
//! inputs, `Capacity` for work that would exceed a configured cap, `Format`
//! for unparseable files or spec strings, `Io` for filesystem failures.
//! The CLI maps these onto stable exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code for the CLI: 0 success, 2 validation, 3 capacity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Format(_) => 2,
            Error::Capacity(_) => 3,
            Error::Io(_) => 1,
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
