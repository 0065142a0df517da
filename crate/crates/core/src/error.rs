use thiserror::Error;

use crate::Natural;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(Natural),

    #[error("{value} and {modulus} are not coprime; the order is undefined")]
    NotCoprime { value: Natural, modulus: Natural },

    #[error("{0} is not prime")]
    NotPrime(Natural),

    #[error("{divisor} does not divide {value}")]
    NotDivisible { divisor: Natural, value: Natural },

    #[error("factorization multiplies to {product}, expected {expected}")]
    FactorizationMismatch { product: Natural, expected: Natural },

    #[error("base {base} is outside the admissible range [2, {max}]")]
    BaseOutOfRange { base: Natural, max: Natural },

    /// A theorem's hypothesis does not hold for the supplied input.
    #[error("{test}: precondition failed: {condition}")]
    Precondition {
        test: &'static str,
        condition: String,
    },

    /// A structural result was contradicted by computation. Mathematically
    /// significant if it ever fires.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn precondition(test: &'static str, condition: impl Into<String>) -> Self {
        Error::Precondition {
            test,
            condition: condition.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
