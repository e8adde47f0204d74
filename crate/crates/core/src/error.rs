use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("divisibility error: {0}")]
    Divisibility(String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("graph structure error: {0}")]
    Structure(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
