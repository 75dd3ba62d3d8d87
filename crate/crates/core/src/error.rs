use thiserror::Error;

/// Errors produced by the metric, distortion, channel and harness layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed PGM/Y4M/model input. `offset` is the byte (or line) where parsing stopped.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("frame too small: {width}x{height}, need at least {min_width}x{min_height}")]
    FrameTooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("insufficient patches: {found} selected, need {required}")]
    InsufficientPatches { found: usize, required: usize },

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}
