use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid variety spec: {0}")]
    InvalidSpec(String),

    #[error("degenerate cubic: {0}")]
    DegenerateCubic(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense size {size} exceeds limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },

    #[error("non-finite value encountered: {0}")]
    NonFiniteValue(String),

    #[error("infeasible start: distance {distance:e} exceeds {eps:e}")]
    InfeasibleStart { distance: f64, eps: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
