use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested computation exceeds a configured size limit.
    #[error("capacity exceeded: {what} needs n <= {limit}, got n = {n}")]
    Capacity {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("model decode error: {0}")]
    Decode(String),

    /// The solver produced output that does not follow the competition protocol.
    #[error("solver protocol error: {0}")]
    Protocol(String),

    #[error("solver configuration error: {0}")]
    Config(String),

    /// A decoded model failed re-verification; points at an encoder bug.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("record log {path}: {source}")]
    RecordLog {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
