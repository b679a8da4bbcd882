use thiserror::Error;

#[derive(Debug, Error)]
pub enum RskError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("norm family rejected: {0}")]
    InadmissibleNorm(String),
    #[error("no closed-form associate for {0}; numeric associate is a lower bound only")]
    UnsupportedBase(String),
    #[error("unknown theorem id: {0}")]
    UnknownTheorem(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, RskError>;
