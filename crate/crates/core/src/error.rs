//! Error type shared across the crate.
//!
//! The three public categories map onto the CLI exit codes: domain errors
//! (invalid parameters) exit 1, budget exhaustion exits 2, and I/O or
//! serialization failures exit 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters or a request outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured effort budget ran out before the result was decided.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// Filesystem failure while reading or writing artifacts.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON in a checkpoint or other persisted artifact.
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    /// An internal invariant failed; this indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
