use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the algebra, reduction, Thue and oracle layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("degree {degree} is below the minimum {min}")]
    DegreeTooLow { degree: usize, min: usize },
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("unsupported form degree {0}")]
    UnsupportedDegree(usize),
    #[error("negative input {0}")]
    NegativeInput(BigInt),
    #[error("zero input")]
    ZeroInput,
    #[error("invalid reduction problem: {0}")]
    InvalidProblem(String),
    #[error("({0}, {1}, {2}) is not a zero of the quadratic form")]
    NotAZero(BigInt, BigInt, BigInt),
    #[error("no nontrivial zero of the conic found with search bound {0}")]
    NoZeroFound(u64),
    #[error("fewer than two independent linear factors")]
    SingularFactors,
    #[error("k = {0} does not divide every coordinate form value")]
    KDoesNotDivide(BigInt),
    #[error("polynomial is reducible over the rationals")]
    Reducible,
    #[error("index routes disagree: index form gives {form}, discriminant ratio gives {oracle}")]
    RouteDisagreement { form: BigInt, oracle: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
