use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("singular Gram matrix; retry with ridge ≈ {suggested_ridge:e}")]
    SingularGram { suggested_ridge: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        LabError::InvalidInput(msg.into())
    }
}
