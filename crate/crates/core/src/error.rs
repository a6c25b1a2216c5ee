use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("logarithmic singularity: nonzero t^-1 coefficient in integrand")]
    LogarithmicSingularity,
    #[error("non-unit leading coefficient {0} (not an invertible rational)")]
    NonUnitLeading(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("coefficient index {index} outside [{valuation}, {order}]")]
    OutOfRange { index: i64, valuation: i64, order: i64 },
    #[error("unexpected pole: residual t^{power} term {coeff}")]
    UnexpectedPole { power: i64, coeff: String },
    #[error("generation failure at degree {degree}: {reason}")]
    Generation { degree: i64, reason: String },
    #[error("insufficient moments for {label}: need at least {required}, got {got}")]
    InsufficientMoments { label: String, required: usize, got: usize },
    #[error("unknown series selector {0:?}")]
    UnknownSeries(String),
}

pub type Result<T> = std::result::Result<T, Error>;
