use std::path::PathBuf;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown column `{0}` in cohort header")]
    UnknownColumn(String),

    #[error("missing required column `{0}` in cohort header")]
    MissingColumn(String),

    #[error("cannot parse value {value:?} at row {row}, column {column}: {reason}")]
    Parse {
        row: u64,
        column: String,
        value: String,
        reason: String,
    },

    #[error("{field} = {value} is outside the allowed range {range}")]
    OutOfRange {
        field: String,
        value: f64,
        range: &'static str,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("repetition {repetition}, fold {fold}: {source}")]
    InFold {
        repetition: usize,
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_fold(self, repetition: usize, fold: usize) -> Self {
        Error::InFold {
            repetition,
            fold,
            source: Box::new(self),
        }
    }
}
