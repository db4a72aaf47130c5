use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid rearrangement: {0}")]
    InvalidRearrangement(String),

    #[error("non-finite sample {value} in cell {index}")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid space specification: {0}")]
    InvalidSpec(String),

    /// The integral diverges or the grid is too shallow to certify its tail.
    #[error("tail not converged (last-octave increment {last_octave:e}, relative tail {relative:e})")]
    TailNotConverged { last_octave: f64, relative: f64 },

    #[error("objective diverged at every scanned parameter value")]
    ObjectiveDiverged,

    #[error("no usable samples ({skipped} skipped)")]
    EmptyEffectiveCorpus { skipped: usize },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
