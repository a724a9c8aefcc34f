use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the workbench.
///
/// The variants fall into three families that the CLI maps onto distinct exit
/// codes: malformed input, a failed mathematical check, and an enumeration
/// that would exceed the capacity guard.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Structural(String),

    #[error("{what} violates its laws: {report}")]
    Laws { what: &'static str, report: Report },

    #[error("operands live over different quantales")]
    QuantaleMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{operation} requires an integral quantale (k = top)")]
    NotIntegral { operation: &'static str },

    #[error("image is not normal: conjugating {element} by {conjugator} leaves the subgroup")]
    NotNormal { element: usize, conjugator: usize },

    #[error("enumeration needs {candidates} candidates, above the guard of {limit}")]
    Capacity { candidates: u128, limit: u128 },

    #[error("theorem check `{check}` failed: {detail}")]
    TheoremCheck { check: &'static str, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn theorem(check: &'static str, detail: impl Into<String>) -> Self {
        Error::TheoremCheck { check, detail: detail.into() }
    }

    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Laws { .. } | Error::TheoremCheck { .. } => 1,
            Error::Capacity { .. } => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Document(e.to_string())
    }
}
