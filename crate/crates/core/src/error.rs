use std::fmt;

use crate::gauss::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("unknown crossing label {0}")]
    UnknownLabel(Label),
    #[error("splicing the only crossing would leave a curve without crossings")]
    DegenerateResult,
    #[error("invalid cut position {position} for a word of length {len}")]
    InvalidPosition { position: usize, len: usize },
    #[error("word {0} is not realizable as a spherical curve")]
    NotRealizable(String),
    #[error("curve is not reduced")]
    NotReduced,
    #[error("no reducible curve within {depth} inverse splices of {key}")]
    BoundViolation { key: String, depth: usize },
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// True for errors that indicate a broken invariant rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::BoundViolation { .. } | Error::InvariantViolation(_))
    }
}

/// A syntax error in one of the small text formats (predicates, rules, signed words).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset (or line number for line-oriented formats) of the failure.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}
