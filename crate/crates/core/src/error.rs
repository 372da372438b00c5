use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polygon side count {0} is less than 2")]
    InvalidSideCount(u32),
    #[error("flower center length {0} is less than 2")]
    InvalidCenter(usize),
    #[error("flower declares a center of length {declared} but lists {got} petals")]
    PetalCountMismatch { declared: usize, got: usize },
    #[error("edge {0} does not exist in this graph")]
    UnknownEdge(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("index {index} is out of range 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("relation matrix presents an infinite group")]
    InfiniteGroup,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph carries no face decomposition")]
    NotPlanarDecomposed,
    #[error("operation is undefined for the trivial chain")]
    TrivialChain,
    #[error("non-trivial petals do not all have the same number of spanning trees")]
    UnequalPetals,
    #[error("not a prime partition: {0}")]
    InvalidPartition(String),
    #[error("{0}")]
    BadParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
