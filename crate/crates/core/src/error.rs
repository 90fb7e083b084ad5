use thiserror::Error;

pub type Result<T, E = QuonError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum QuonError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("size cap exceeded: {what} = {requested} (limit {limit})")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("null state: {0}")]
    NullState(String),

    #[error("ill-conditioned overlap matrix: {0}")]
    IllConditioned(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl QuonError {
    /// Process exit code for the CLI: 2 for input errors, 3 for resource caps.
    pub fn exit_code(&self) -> u8 {
        match self {
            QuonError::CapExceeded { .. } => 3,
            _ => 2,
        }
    }
}
