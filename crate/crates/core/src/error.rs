use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("sampling probabilities are undefined: {0}")]
    UndefinedProbabilities(String),

    #[error("the optimal sampler requires an exact triangle profile of the same graph")]
    MissingProfile,

    #[error("pair ({i}, {j}) carries local triangles but has zero selection probability")]
    SupportViolation { i: usize, j: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no finite sample size exists: the graph has no triangles")]
    TriangleFree,

    #[error("supplied upper bound {bound} is below an observed local count ({observed})")]
    BoundViolation { bound: f64, observed: f64 },

    #[error("stream is in phase {found:?}, expected {expected:?}")]
    StreamPhase {
        expected: crate::stream::StreamPhase,
        found: crate::stream::StreamPhase,
    },

    #[error("edge ({u}, {v}) appears more than once in a single stream pass")]
    DuplicateStreamEdge { u: usize, v: usize },

    #[error("{0}")]
    NonReplayable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
