use thiserror::Error;

use crate::condition::Certificate;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator set mismatch: {left} vs {right} generators")]
    GeneratorMismatch { left: usize, right: usize },

    #[error("no numeric value for generator `{0}`")]
    MissingValuation(String),

    #[error("{what} has {size} elements, above the enumeration cap of {cap}; {advice}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: usize,
        advice: &'static str,
    },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid IFS specification: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("channel matrix is not fully connected")]
    NotFullyConnected,

    #[error("condition (*) fails at receiver {receiver} (degree {degree}); pass the waiver to run anyway")]
    ConditionViolated {
        receiver: usize,
        degree: u32,
        certificate: Box<Certificate>,
    },

    #[error("estimate was produced for a different IFS specification")]
    SpecMismatch,

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(what: &'static str, size: impl ToString, cap: usize, advice: &'static str) -> Self {
        Error::CapExceeded {
            what,
            size: size.to_string(),
            cap,
            advice,
        }
    }
}
