use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{a} is not invertible mod {n} (gcd = {gcd})")]
    NotInvertible { a: BigUint, n: BigUint, gcd: BigUint },

    #[error("work budget exhausted while {0}")]
    BudgetExhausted(String),

    #[error("moduli at positions {i} and {j} share the factor {gcd}")]
    NonCoprimeModuli { i: usize, j: usize, gcd: BigUint },

    #[error("value {value} is not below the modulus {modulus}")]
    MessageTooLarge { value: BigUint, modulus: BigUint },

    #[error("exponent {e} shares the factor {gcd} with the key modulus' lambda")]
    InvalidExponent { e: BigUint, gcd: BigUint },

    #[error("phi value is inconsistent with the modulus")]
    InconsistentPhi,

    #[error("key file line {line}: {msg}")]
    KeyFile { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
