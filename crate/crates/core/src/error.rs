use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    /// `g n g^-1` is not in the subgroup.
    #[error("subgroup is not normal: conjugating element {g} by {conjugator} leaves the subgroup")]
    NotNormal { conjugator: usize, g: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("{label}: {witness}")]
    Violation { label: String, witness: String },
    #[error("mismatched input: {0}")]
    Mismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    pub fn violation(label: &str, witness: impl Into<String>) -> Self {
        Error::Violation { label: label.to_string(), witness: witness.into() }
    }

    /// Short machine readable kind, used by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Domain(_) => "domain",
            Error::NotSubgroup(_) => "not-subgroup",
            Error::NotNormal { .. } => "not-normal",
            Error::InvalidGraph(_) => "invalid-graph",
            Error::Violation { .. } => "violation",
            Error::Mismatch(_) => "mismatch",
            Error::Unsupported(_) => "unsupported",
            Error::Internal(_) => "internal",
        }
    }
}
