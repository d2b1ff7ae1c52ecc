//! Exact scalars, dense matrices, rank and kernel computation.
//!
//! Deficiency claims must always come from [`kernel_basis`] over ℚ; a modular
//! rank is only ever used as a lower bound.

mod elimination;
mod laplace;
mod matrix;
pub mod primes;
mod scalar;

pub use laplace::laplace_det_row_symbolic;
pub use matrix::{kernel_basis, rank_exact, rank_modular, ExactMatrix, ModularRank};
pub use primes::{is_prime_u64, next_prime, random_prime};
pub use scalar::{Field, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{0} is not an odd prime below 2^63")]
    InvalidPrime(u64),
    #[error("prime {prime} divides a denominator")]
    DenominatorDivisible { prime: u64 },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },
    #[error("modular rank requires a rational matrix")]
    NotRational,
    #[error("every prime tried divides a denominator: {tried:?}")]
    PrimeBudgetExhausted { tried: Vec<u64> },
}
