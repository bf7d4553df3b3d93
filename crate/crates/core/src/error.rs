use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range for universe of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("dimension k = {k} is below the vocabulary arity {arity}")]
    ArityTooLarge { k: usize, arity: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("vocabulary mismatch between structures")]
    VocabularyMismatch,

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
