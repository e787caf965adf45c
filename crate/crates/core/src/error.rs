use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph with {vertices} vertices exceeds the configured limit of {limit}")]
    SizeLimit { vertices: u128, limit: u128 },

    #[error("malformed graph6 input: {0}")]
    Graph6(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("search budget exhausted while computing {0}")]
    BudgetExhausted(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
