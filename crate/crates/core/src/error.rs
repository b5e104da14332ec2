//! Error taxonomy shared by the whole workspace.
//!
//! The split mirrors the CLI exit codes: structural and precondition
//! failures are caller errors (exit 2), budget overruns are resource
//! errors (exit 3), and `Internal` marks a broken library invariant
//! (exit 1, always a bug).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data: ragged tables, out-of-range indices,
    /// unparseable files.
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation precondition was violated (valid data, invalid call).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An explicit enumeration or memory budget was exceeded.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// A library invariant failed to hold; never expected.
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code mandated for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Structural(_) | Error::Precondition(_) => 2,
            Error::Resource(_) => 3,
            Error::Internal(_) => 1,
        }
    }
}
