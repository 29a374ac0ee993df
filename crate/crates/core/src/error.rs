use thiserror::Error;

use crate::group::Ambient;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} exceeds the supported maximum of {max}", max = crate::gf2::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("ambient mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: Ambient, found: Ambient },

    #[error("operation requires an F2 ambient, found {0}")]
    UnsupportedAmbient(Ambient),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("duplicate element {0}")]
    DuplicateElement(String),

    #[error("length mismatch: s has {s} entries, t has {t}")]
    LengthMismatch { s: usize, t: usize },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::OutOfRange(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
