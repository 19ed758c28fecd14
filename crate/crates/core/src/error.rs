use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl QError {
    /// Process exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            QError::Convergence(_) | QError::CapExceeded(_) => 3,
            QError::Numeric(_) => 4,
            QError::ContextMismatch(_)
            | QError::InvalidIndex(_)
            | QError::Precondition(_)
            | QError::Parse(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QError::ContextMismatch(_) => "context_mismatch",
            QError::InvalidIndex(_) => "invalid_index",
            QError::Precondition(_) => "precondition",
            QError::CapExceeded(_) => "cap_exceeded",
            QError::Convergence(_) => "convergence",
            QError::Parse(_) => "parse",
            QError::Numeric(_) => "numeric",
        }
    }
}

pub type QResult<T> = Result<T, QError>;
