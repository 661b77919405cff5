use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed element: {0}")]
    MalformedElement(String),

    #[error("descriptor error: {0}")]
    Descriptor(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("enumeration budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("coefficient support depth {depth} exceeds available prefix length {available}")]
    SupportExceedsPrefix { depth: usize, available: usize },

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}
