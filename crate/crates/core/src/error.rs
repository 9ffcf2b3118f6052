use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("{what} exceeds guard ({value} > {limit})")]
    Guard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NonUnitary(f64),

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("gate {0} must be lowered before export")]
    Unlowered(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
