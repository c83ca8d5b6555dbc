use thiserror::Error;

/// Errors raised while validating names, instances and spaces.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid binary word {0:?}: expected a string over '0' and '1'")]
    InvalidWord(String),
    #[error("value {value} at position {position} is not a bit")]
    NotABit { position: usize, value: u64 },
    #[error("generator tail cycle must be non-empty")]
    EmptyCycle,
    #[error("a repeat_last tail needs a non-empty head")]
    RepeatLastWithoutHead,
    #[error("invalid rational {0:?}: expected \"num/den\" with den > 0")]
    InvalidRational(String),
    #[error("invalid metric space: {0}")]
    InvalidSpace(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("column {column} changes at stage {stage}, after its declared stabilization stage {declared}")]
    StabilizationViolated {
        column: u64,
        stage: u64,
        declared: u64,
    },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
