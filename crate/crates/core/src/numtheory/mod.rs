//! Arbitrary-precision integer and modular-arithmetic primitives, the
//! totient/Carmichael/order machinery, and primality utilities.

pub mod arith;
pub mod euclid;
pub mod factor;
pub mod order;
pub mod primality;

/// Non-negative arbitrary-precision integer used across the crate.
pub type Natural = num_bigint::BigUint;

pub use arith::{ilog, integer_kth_root, isqrt, isqrt_ceil, mod_pow, pure_power_exponent};
pub use euclid::{crt, ext_euclid, mod_inv, ExtGcdResult, InverseStrategy};
pub use factor::{carmichael_lambda, euler_phi, factorize, factorize_with_budget, Factorization};
pub use order::{iteration_exponent, omega, omega_tower};
pub use primality::{
    gen_doubly_safe_prime, gen_prime, is_doubly_safe, is_prime, next_prime,
};
