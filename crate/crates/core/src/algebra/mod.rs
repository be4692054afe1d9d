//! Exact arithmetic in characteristic `p`.

mod cartier;
mod field;
mod poly;
mod rational;
mod series;

pub use cartier::{cartier_rational, RationalDifferential};
pub use field::{is_prime, FiniteField, Fq, MAX_FIELD_ORDER};
pub use poly::Poly;
pub use rational::RationalFunction;
pub use series::Laurent;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("field F_{p}^{s} exceeds the supported size")]
    FieldTooLarge { p: u32, s: u32 },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("series precision exhausted")]
    PrecisionExhausted,
    #[error("element has no root of the requested order")]
    NoRoot,
}
