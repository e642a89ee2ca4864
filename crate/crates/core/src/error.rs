use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("invalid factor: {0}")]
    InvalidFactor(String),

    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed at {step}: {lhs} != {rhs}")]
    Verification {
        step: String,
        lhs: String,
        rhs: String,
    },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
