//! ray-forge: a computational number theory library and RSA cryptanalysis
//! workbench. Key systems are built on the Carmichael function; the attack
//! module covers the classical breaks (Fermat factoring, message iteration,
//! blind signatures, common modulus, low-exponent broadcast) together with
//! order-tower and Euler-function-ray private-key recovery.

pub mod analysis;
pub mod attacks;
pub mod cli;
pub mod error;
pub mod numtheory;
pub mod rsa;

pub use error::{Error, Result};
pub use numtheory::Natural;
