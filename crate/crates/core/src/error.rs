use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid subsystem: {0}")]
    InvalidSpec(String),

    #[error("unsupported chain: {0}")]
    UnsupportedChain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical diagnostic: {0}")]
    Numerical(String),

    #[error("size cap exceeded: {sites} sites (limit {limit})")]
    SizeCap { sites: usize, limit: usize },

    #[error("degenerate ground state: gap {gap:e}")]
    DegenerateGroundState { gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
