use listop_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad config or parameters. Exit status 2.
    #[error("invalid configuration: {0}")]
    Validation(String),

    /// An exhaustive enumeration exceeded the budget. Exit status 3.
    #[error("{0}")]
    Budget(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Budget { .. } => CliError::Budget(e.to_string()),
            CoreError::Io(io) => CliError::Io(io),
            CoreError::Input(_) | CoreError::Domain(_) | CoreError::Parse { .. } | CoreError::Degenerate(_) | CoreError::Json(_) => {
                CliError::Validation(e.to_string())
            }
            CoreError::Construction(_) => CliError::Failed(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Validation error naming the offending field.
pub fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {msg}"))
}
