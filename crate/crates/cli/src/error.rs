use thiserror::Error;

use smd_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("infeasible estimator: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_INVALID_CONFIG,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Core(e) => match e {
                CoreError::EnumerationTooLarge { .. }
                | CoreError::UnsupportedFamily(_)
                | CoreError::ExactTooLarge { .. }
                | CoreError::MethodSourceMismatch { .. } => EXIT_INFEASIBLE,
                CoreError::Numeric(_) => EXIT_NUMERIC,
                _ => EXIT_INVALID_CONFIG,
            },
            CliError::Io(_) | CliError::Json(_) => EXIT_NUMERIC,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
