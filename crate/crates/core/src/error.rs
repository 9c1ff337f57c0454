use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid frequency: {0}")]
    InvalidFrequency(String),

    #[error("invalid relation data: {0}")]
    InvalidRelations(String),

    /// Numeric relation detection could neither confirm nor rule out a
    /// rational dependency for the value at `index`.
    #[error("relation detection inconclusive for value {index} (residual {residual:e}, tolerance {tolerance:e})")]
    AmbiguousRelation {
        index: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid abscissa x = {0} (must be > 0)")]
    InvalidAbscissa(f64),

    #[error("undefined abscissa: every prefix end has zero frequency")]
    UndefinedAbscissa,

    #[error("group model does not cover frequency index {0}")]
    ModelMismatch(usize),

    #[error("invalid group model: {0}")]
    InvalidModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid exponent p = {0} (must be >= 1)")]
    InvalidExponent(f64),

    #[error(
        "accuracy not achieved: error bound {error_bound:e} exceeds tolerance {tolerance:e} (estimate {estimate})"
    )]
    AccuracyNotAchieved {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
    },

    #[error("gcd(q1, q2) = {0} is not 1")]
    NotCoprime(i64),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
