use grasswig_core::Error as CoreError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for a detected violation of the preservation hypothesis, 2 for
    /// input or usage problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                CoreError::NotPreserving { .. }
                | CoreError::NotWigner { .. }
                | CoreError::VerificationFailed { .. },
            ) => 1,
            _ => 2,
        }
    }
}
