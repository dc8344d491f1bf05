//! Attacks on RSA key systems, each returning a structured outcome with
//! witnesses and deterministic work counters.

pub mod classical;
pub mod omega_attack;
pub mod outcome;
pub mod ray;

pub use classical::{
    blinding_attack, broadcast_attack, common_modulus_attack, fermat_factor, iteration_attack,
};
pub use omega_attack::direct_omega_attack;
pub use outcome::{AttackOutcome, WitnessValue, Work};
pub use ray::{
    phi_from_ray, phi_to_private, ray_attack, ray_bounds, RayBounds, RayConfig, RayDirection,
    RayMode,
};
