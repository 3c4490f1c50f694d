use thiserror::Error;

use crate::complex::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: {count} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("boundary maps do not compose to zero at degrees {:?}", .0.violations)]
    InvalidComplex(ValidationReport),

    #[error("degree {degree} is out of range (max degree {max_degree})")]
    DegreeOutOfRange { degree: usize, max_degree: usize },

    #[error("no satisfying assignment")]
    NoSatisfyingAssignment,

    #[error("assignment does not satisfy the formula")]
    NotSatisfying,

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("configuration {node} has {successors} distinct successors; the decider is not deterministic")]
    Nondeterministic { node: usize, successors: usize },

    #[error("trace {trace} needs {steps} steps, above the time bound {bound}")]
    TimeBoundExceeded {
        trace: String,
        steps: usize,
        bound: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }
}
