use crate::graph::Vertex;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("input graph is not a tree")]
    NotATree,
    #[error("input graph is disconnected")]
    Disconnected,
    #[error("vertex {0} is not a special branching point")]
    NotSpecialBranchingPoint(Vertex),
    #[error("graph has {n} vertices, which exceeds the ceiling of {ceiling} for this operation")]
    TooLarge { n: usize, ceiling: usize },
    #[error("no solution of size at most {0}")]
    NoSolutionWithin(usize),
    #[error("set-cover universe element {0} is not covered by any candidate set")]
    Uncoverable(usize),
    #[error("subtree contains a t-stem with t >= 2 at vertex {0}")]
    StemPresent(Vertex),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
