use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("axis {axis} is out of range for dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("symbol {0} is outside the alphabet 0..4")]
    SymbolOutOfRange(u8),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("dimension {n} is below the required minimum {min}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no data: {0}")]
    MissingData(String),

    /// A computed object contradicts a proven structural statement.
    #[error("structural defect: {0}")]
    Defect(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn defect(msg: impl Into<String>) -> Self {
        Error::Defect(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
