use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary (deviation {deviation:e} exceeds {tol:e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group too large: closure exceeded limit {limit} after {partial} elements")]
    GroupTooLarge { partial: usize, limit: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that stem from size caps rather than malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::GroupTooLarge { .. } | Error::ResourceLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
