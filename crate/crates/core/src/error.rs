use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph has no cycle")]
    NoCycle,
    #[error("no cycle reachable from vertex {0}")]
    NoCycleReachable(usize),
    #[error("too many cycles (cap {0})")]
    TooManyCycles(usize),
    #[error("edge {0} is a loop: subdivide a loop twice instead")]
    LoopEdge(usize),
    #[error("vertex-cost solvers need a simple graph: {0}")]
    NotSimple(String),
    #[error("ground set of {size} elements is too large for exhaustive checking (limit {limit})")]
    GroundSetTooLarge { size: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("embedding is not planar/spherical: {0}")]
    NotPlanar(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no cut")]
    NoCut,
    #[error("cut verification failed: {0}")]
    CutVerification(String),
    #[error("family {family} is not {k}-wide: sets {a} and {b} have a union of size at most {k}")]
    NotWide {
        k: usize,
        family: usize,
        a: usize,
        b: usize,
    },
    #[error("graph is not of the layered hedge shape: {0}")]
    NotLayered(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
