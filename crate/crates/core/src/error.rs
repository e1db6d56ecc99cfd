use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate plan: {0}")]
    DegeneratePlan(String),
    #[error("infeasible design: {0}")]
    InfeasibleDesign(String),
    #[error("bound undefined: {0}")]
    UndefinedBound(String),
    #[error("unknown estimator `{0}`")]
    UnknownEstimator(String),
    #[error("configuration error: {0}")]
    Configuration(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegeneratePlan(msg.into())
    }
}
