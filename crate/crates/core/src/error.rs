use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error("no invertible sample after {0} rejections")]
    RngExhausted(usize),
    #[error("enumeration of {needed} cases exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("signing failed after {0} vinegar draws")]
    SigningFailed(usize),
    #[error("polynomial degree {0} too high for this method")]
    DegreeTooHigh(u32),
    #[error("relation space still shrinking after {0} samples")]
    InsufficientSamples(usize),
    #[error("cannot isolate the twisted coordinates: {0}")]
    IsolationAmbiguous(String),
    #[error("no solution found up to degree {0}")]
    NoSolutionFound(u32),
    #[error("bad magic or unknown key kind")]
    BadMagic,
    #[error("truncated stream")]
    TruncatedStream,
    #[error("parameter sanity check failed: {0}")]
    ParamSanity(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
