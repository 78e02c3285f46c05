use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("representation limit exceeded: {0}")]
    RepresentationLimit(String),
    #[error("infinite tail underflow: a family starting at {0} would reach negative exponents")]
    InfiniteTailUnderflow(String),
    #[error("negative exponent {0}")]
    NegativeExponent(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("expected a positive surinteger, found {0}")]
    NonPositive(String),
    #[error("the zero polynomial has no degree")]
    ZeroPoly,
    #[error("terms are not strictly descending at index {0}")]
    NonDescendingInput(usize),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("budget exhausted after {steps} steps; partial remainder degree {remainder_degree}")]
    BudgetExhausted {
        steps: usize,
        remainder_degree: String,
        /// Degrees of the Euclidean remainders reached before giving up.
        chain: Vec<String>,
    },
    #[error("not invertible: gcd with the modulus is {witness}")]
    NotInvertible { witness: String },
    #[error("elements belong to different moduli")]
    ModulusMismatch,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
