use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid instance: {}", .0.join("; "))]
    InvalidInstance(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("no supporting hyperplane; use cut at perturbed point (f = {0:e})")]
    DegeneratePoint(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance too large for enumeration: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
