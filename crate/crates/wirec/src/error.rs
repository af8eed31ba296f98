use thiserror::Error;

/// Errors shared across parsing, sorting, exploration and equivalence checking.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: u32, col: u32, msg: String },

    /// Two boundaries that should agree do not. The rendered message format
    /// is stable; CLI output and tests rely on it verbatim.
    #[error("sort error at {line}:{col}: expected {expected}, found {found}")]
    SortMismatch {
        line: u32,
        col: u32,
        expected: String,
        found: String,
    },

    /// Any other sorting failure (unbound variables, marker misuse, ...).
    #[error("sort error at {line}:{col}: {msg}")]
    Sort { line: u32, col: u32, msg: String },

    #[error("state budget exceeded: more than {budget} canonical states required")]
    Budget { budget: usize },

    /// Bisimilarity was requested across two different sorts.
    #[error("sort mismatch: left term has sort {left}, right term has sort {right}")]
    IncompatibleSorts { left: String, right: String },

    /// An operation that needs a total transition relation was handed a
    /// truncated exploration.
    #[error("incomplete exploration: {0}")]
    Incomplete(String),

    /// Malformed serialized LTS data.
    #[error("invalid lts data: {0}")]
    Schema(String),
}

impl Error {
    pub fn parse(line: u32, col: u32, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn sort(line: u32, col: u32, msg: impl Into<String>) -> Self {
        Error::Sort {
            line,
            col,
            msg: msg.into(),
        }
    }
}
