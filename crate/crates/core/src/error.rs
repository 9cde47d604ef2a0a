use thiserror::Error;

/// Errors produced by the library.
///
/// Vertices inside messages are printed 1-based, matching the text formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("state cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("illegal move ({x1}, {x2}): {reason}")]
    IllegalMove {
        x1: usize,
        x2: usize,
        reason: String,
    },

    #[error("invalid board path: {0}")]
    InvalidBoardPath(String),

    #[error("pebble image is not a path: {0}")]
    PebbleImageNotPath(String),

    #[error("permutation is not an automorphism of the graph")]
    NotAutomorphism,

    #[error("order {0} is not a prime power")]
    NotPrimePower(u64),

    #[error("graph is not connected")]
    Disconnected,

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("internal validation failure in {step}: {detail}")]
    Internal { step: String, detail: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn internal(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Internal {
            step: step.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
