use thiserror::Error;

/// Errors produced by the boxcast library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("structural error: {0}")]
    Structure(String),

    #[error("unrecognized month label {0:?}")]
    MonthFormat(String),

    #[error("duplicate record for month {month}, borough {borough:?}")]
    Duplicate { month: String, borough: String },

    #[error("unknown borough(s): {}", .0.join(", "))]
    UnknownBorough(Vec<String>),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid model order: {0}")]
    InvalidOrder(String),

    #[error("no candidate model could be fit: {0}")]
    NoModel(String),

    #[error("CSV error: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Csv(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
