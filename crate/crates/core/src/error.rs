use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

/// A malformed graph file, with the 1-based line number of the offence.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("vertex id {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("edge weight must be at least 1")]
    ZeroWeight,
    #[error("cannot place {m} distinct arcs on {n} vertices")]
    TooManyEdges { n: usize, m: usize },
    #[error("cost range [{lo}, {hi}] is empty")]
    EmptyCostRange { lo: i64, hi: i64 },
    #[error("graph has no source vertex")]
    NoSource,
    #[error("vertex {0} is not reachable from the source")]
    Unreachable(VertexId),
    #[error("edge list is not a simple directed cycle")]
    NotSimpleCycle,
    #[error("edge {0} does not exist")]
    NoSuchEdge(EdgeId),
    #[error("requested parameter value lies above lambda*")]
    AboveLambdaStar,
    #[error("lambda* is not finite")]
    LambdaNotFinite,
    #[error("potential has {got} values but the graph has {expected} vertices")]
    PotentialSize { expected: usize, got: usize },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph has {n} vertices; exhaustive routine is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
