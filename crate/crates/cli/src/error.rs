use thiserror::Error;
use unwrap_kit::Error as CoreError;

/// A failure together with the process exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command line or configuration file (exit 1).
    #[error("{0}")]
    Usage(String),
    /// Invalid or infeasible frequency plan or input (exit 2).
    #[error("{0}")]
    Plan(String),
    /// Numeric failure while running (exit 3).
    #[error("{0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Plan(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Configuration(_) | CoreError::UnknownEstimator(_) => CliError::Usage(msg),
            CoreError::InvalidArgument(_) | CoreError::InfeasibleDesign(_) => CliError::Plan(msg),
            CoreError::DegeneratePlan(_) | CoreError::UndefinedBound(_) => CliError::Numeric(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
