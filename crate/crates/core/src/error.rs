use thiserror::Error;

/// Errors raised by the grid, tally and cost-model layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LmError {
    #[error("invalid zone dimension {0}: need m >= 2")]
    InvalidDimension(usize),

    #[error("partition scheme {scheme} does not divide a {m}x{m} zone")]
    Partition { scheme: String, m: usize },

    #[error("partition coverage error: {0}")]
    Coverage(String),

    #[error("cells {from:?} and {to:?} are not adjacent")]
    NotAdjacent { from: (i64, i64), to: (i64, i64) },

    #[error("cell ({0}, {1}) is outside the zone")]
    CellOutOfRange(i64, i64),

    #[error("degenerate tally: {0}")]
    DegenerateTally(String),

    #[error("invalid probability list: {0}")]
    InvalidProbability(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown scenario key {0:?}")]
    UnknownKey(String),

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },

    #[error("unknown figure id {0} (known: 3, 5, 6, 7, 8, 9, 10)")]
    UnknownFigure(u32),
}

pub type Result<T> = std::result::Result<T, LmError>;

pub(crate) fn domain(msg: impl Into<String>) -> LmError {
    LmError::Domain(msg.into())
}
