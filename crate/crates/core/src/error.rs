use thiserror::Error;

/// Errors surfaced by lattice, tensor, and solver operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid norm family: {0}")]
    InvalidFamily(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("arity mismatch: function takes {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("function is not positively homogeneous of degree 1: {0}")]
    NotHomogeneous(String),

    #[error("vectors are not pairwise disjoint")]
    NotDisjoint,

    #[error("entries must be nonnegative: {0}")]
    NegativeEntries(String),

    #[error("dimension {0} too large for this operation (limit {1})")]
    DimensionTooLarge(usize, usize),

    #[error("linear program error: {0}")]
    LinearProgram(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
