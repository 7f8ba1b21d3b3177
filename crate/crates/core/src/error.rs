use thiserror::Error;

/// Errors raised by the symbolic model, the algorithms built on it, and the
/// file front end.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands belong to different universes (different vertex counts or
    /// different metering contexts).
    #[error("contract violation: universe mismatch ({left} vs {right} vertices or foreign context)")]
    UniverseMismatch { left: usize, right: usize },

    #[error("pick on an empty set")]
    EmptyPick,

    #[error("vertex id {id} out of range for a universe of {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    /// A documented precondition of an operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid MDP: {0}")]
    Validation(String),

    /// An internal consistency check failed (oracle disagreement, broken
    /// algorithm invariant).
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
