//! RSA key systems built on the Carmichael function, the key-pair lattice
//! and its fundamental region, the key-hygiene audit, and the text key
//! file format.

pub mod audit;
pub mod keyfile;
pub mod keys;
pub mod lattice;

pub use audit::{audit_key, AuditPolicy, AuditReport, Finding};
pub use keyfile::{read_key, write_key, KeyMaterial};
pub use keys::{decrypt, encrypt, keygen, sign, verify, KeySystem, KeygenOptions, PrivateKey, PublicKey};
pub use lattice::{
    count_keypairs, enumerate_keypairs, fold_to_region_u, region_u_contains, unfold_region_u,
};
