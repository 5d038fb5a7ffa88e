//! Exact densities of primes with prescribed primitive-root behaviour.
//!
//! Given a rational `r` (and optionally a progression `a mod f` and/or an
//! index `t`), this crate computes the density of primes `q` for which
//! `r mod q` generates a subgroup of `F_q^*` of the requested kind, as an
//! exact rational multiple of Artin's constant. Three independent routes are
//! provided:
//!
//! * closed-form evaluation of the density theorems ([`densities`]),
//! * brute-force enumeration of finite affine level groups and their
//!   quadratic character sums ([`finite_model`]),
//! * empirical counts from a segmented prime sieve ([`sieve`]).

pub mod densities;
pub mod finite_model;
pub mod numtheory;
pub mod radical;
pub mod sieve;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input must not be zero")]
    ZeroInput,
    #[error("r must differ from 0, 1 and -1")]
    ExcludedRational,
    #[error("numerator and denominator of r must fit in 64 bits")]
    InputTooLarge,
    #[error("a and f must be coprime, got gcd({a}, {f}) != 1")]
    NotCoprime { a: u64, f: u64 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("residue must be invertible: x ≡ 0 mod q")]
    ZeroResidue,
    #[error("{0} does not divide the level {1}")]
    LevelMismatch(u64, u64),
    #[error("enumeration budget exceeded: {needed} elements > {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("level did not stabilize at prime {p}: level {level} disagrees with level {next}")]
    NotStabilized { p: u64, level: u64, next: u64 },
    #[error("closed form and enumeration disagree for {0}")]
    OracleMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn big_rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
