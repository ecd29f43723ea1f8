use thiserror::Error;

/// Errors raised by the library.
///
/// A violated theorem hypothesis is reported as [`CalxError::Hypothesis`]; it
/// signals that a construction does not apply to the given parameters, not a
/// program fault.
#[derive(Debug, Error)]
pub enum CalxError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid competitor: {0}")]
    InvalidCompetitor(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CalxError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(CalxError::Domain(msg.into()))
}
