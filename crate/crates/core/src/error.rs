use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polar form of zero is undefined")]
    ZeroArgument,
    #[error("modulus polynomial must have degree at least 1")]
    InvalidModulus,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: String, right: String },
    #[error("matrix is singular")]
    Singular,
    #[error("interpolation system is singular")]
    SingularSystem,
    #[error("root finding diverged: {0}")]
    RootFindingDiverged(String),
    #[error("matrix is not row-stochastic: {0}")]
    NotStochastic(String),
    #[error("no limit: {0}")]
    NoLimit(String),
    #[error("power methods disagree: {first} vs {second} at n = {n}")]
    MismatchDetected {
        first: String,
        second: String,
        n: u64,
    },
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
