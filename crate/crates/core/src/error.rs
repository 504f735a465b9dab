use thiserror::Error;

/// Errors raised by instance construction and the covert algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe must contain at least one element")]
    EmptyUniverse,
    #[error("set family must contain at least one set")]
    EmptyFamily,
    #[error("element {element} outside universe 1..={universe_size}")]
    ElementOutOfRange {
        element: usize,
        universe_size: usize,
    },
    #[error("set index {set} outside family 1..={num_sets}")]
    SetOutOfRange { set: usize, num_sets: usize },
    #[error("instance is uncoverable: element {element} lies in no set")]
    Uncoverable { element: usize },
    #[error("brute force limited to {cap} sets, instance has {sets}")]
    BruteForceCap { sets: usize, cap: usize },
    #[error("duplicate set index {0} in cover")]
    DuplicateSet(usize),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("vertex {vertex} outside graph 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected: vertex {0} unreachable from vertex 1")]
    Disconnected(usize),
    #[error("pair endpoints must differ, got ({0}, {0})")]
    SameEndpoints(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no connected sample after {attempts} attempts")]
    RetryBudgetExhausted { attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
