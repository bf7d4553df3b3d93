use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Core {
        context: String,
        source: wl_core::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("round bound violated: {0}")]
    BoundViolation(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_)
            | CliError::Core {
                source: wl_core::Error::InvalidArgument(_) | wl_core::Error::ArityTooLarge { .. },
                ..
            } => 2,
            CliError::Core {
                source: wl_core::Error::BudgetExceeded { .. },
                ..
            } => 3,
            CliError::Io { .. } => 4,
            _ => 1,
        })
    }
}

impl From<wl_core::Error> for CliError {
    fn from(source: wl_core::Error) -> Self {
        CliError::Core {
            context: "error".into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a context string to library errors.
pub trait Context<T> {
    fn context(self, context: impl FnOnce() -> String) -> CliResult<T>;
}

impl<T> Context<T> for wl_core::Result<T> {
    fn context(self, context: impl FnOnce() -> String) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            context: context(),
            source,
        })
    }
}
