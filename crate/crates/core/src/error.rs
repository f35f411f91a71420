use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: expected {expected} variables, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no nonpositive coefficient up to degree {cap} for nv={nv}, m={m}")]
    NoNonpositiveCoefficient { nv: usize, m: usize, cap: usize },

    #[error("scale cap exceeded: {what} = {value} > {cap}")]
    ScaleCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("Las Vegas solver gave up after {0} attempts")]
    RetriesExhausted(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
