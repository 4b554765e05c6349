use thiserror::Error;

use crate::models::MinorModel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("vertex set is empty")]
    EmptySet,

    #[error("vertex set does not induce a connected subgraph")]
    Disconnected,

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("size limit exceeded: {what} has {actual}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A packing exists where the caller asserted there is none.
    #[error("a packing of the forest exists")]
    PackingExists(MinorModel),

    /// A bound guaranteed by a structure theorem did not hold on a concrete input.
    #[error("theorem falsified: {claim} ({detail})")]
    TheoremFalsified { claim: &'static str, detail: String },

    /// An internal invariant of a construction failed.
    #[error("internal contract violation: {0}")]
    Contract(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn falsified(claim: &'static str, detail: impl Into<String>) -> Self {
        Error::TheoremFalsified {
            claim,
            detail: detail.into(),
        }
    }

    /// Short machine-readable kind, used by the CLI's structured errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VertexOutOfRange { .. } => "vertex-out-of-range",
            Error::InvalidEdge(..) => "invalid-edge",
            Error::InvalidPartition(_) => "invalid-partition",
            Error::EmptySet => "empty-set",
            Error::Disconnected => "disconnected",
            Error::InvalidPattern(_) => "invalid-pattern",
            Error::SizeLimit { .. } => "size-limit",
            Error::Precondition(_) => "precondition",
            Error::PackingExists(_) => "packing-exists",
            Error::TheoremFalsified { .. } => "theorem-falsified",
            Error::Contract(_) => "contract-violation",
            Error::Parse { .. } => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
