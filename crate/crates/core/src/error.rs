use thiserror::Error;

use crate::graph::{Edge, Vertex};
use crate::resilience::Cut;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    #[error("edge {edge:?} has an endpoint outside 0..{n}")]
    VertexOutOfRange { edge: Edge, n: usize },

    #[error("graph has no edges, so no giant component")]
    NoGiant,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph must be connected")]
    Disconnected,

    #[error("graph must be {0}-connected")]
    NotKConnected(usize),

    #[error("graph has {n} vertices, exact mode is capped at {cap}; use local search or the greedy attack")]
    TooLarge { n: usize, cap: usize },

    #[error("vertex universe mismatch: expected {expected} vertices, found {found}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("piecewise budget requires a vertex classification")]
    MissingClassification,

    #[error("rearrangement did not settle within {cap} moves")]
    RearrangementCap { cap: usize, partial: Box<Cut> },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
