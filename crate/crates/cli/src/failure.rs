use vqa_core::Error;

pub const USAGE: u8 = 1;
pub const DATA: u8 = 2;
pub const RUNTIME: u8 = 3;

/// An error message paired with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Failure { code: DATA, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Failure { code: RUNTIME, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) => USAGE,
            Error::Io(_) => RUNTIME,
            Error::Parse { .. }
            | Error::DimensionMismatch(..)
            | Error::FrameTooSmall { .. }
            | Error::InvalidFrame(_)
            | Error::InsufficientSamples(_)
            | Error::InsufficientPatches { .. }
            | Error::UndefinedCorrelation(_)
            | Error::Model(_) => DATA,
        };
        Failure { code, message: e.to_string() }
    }
}
