use std::fmt;

use num_bigint::BigInt;

use crate::numtheory::Natural;

/// A named intermediate carried out of an attack so the result can be
/// re-verified independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessValue {
    Nat(Natural),
    Int(BigInt),
    Nats(Vec<Natural>),
    Text(String),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Nat(v) => write!(f, "{v}"),
            WitnessValue::Int(v) => write!(f, "{v}"),
            WitnessValue::Nats(vs) => {
                let mut first = true;
                for v in vs {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}")?;
                    first = false;
                }
                Ok(())
            }
            WitnessValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// Deterministic work counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Work {
    /// Generic loop iterations (Fermat trials, message iterations, ...).
    pub iterations: u64,
    /// Ray windows scanned.
    pub windows: u64,
    /// Modular multiplications performed.
    pub mod_muls: u64,
}

impl fmt::Display for Work {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "iterations={} windows={} mod_muls={}",
            self.iterations, self.windows, self.mod_muls
        )
    }
}

/// Outcome of an attack run: success flag, recovered value when present,
/// ordered witness map, and work counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackOutcome {
    pub success: bool,
    pub recovered: Option<Natural>,
    pub witness: Vec<(&'static str, WitnessValue)>,
    pub work: Work,
}

impl AttackOutcome {
    pub fn success(recovered: Natural, witness: Vec<(&'static str, WitnessValue)>, work: Work) -> Self {
        Self { success: true, recovered: Some(recovered), witness, work }
    }

    pub fn failure(witness: Vec<(&'static str, WitnessValue)>, work: Work) -> Self {
        Self { success: false, recovered: None, witness, work }
    }

    pub fn witness(&self, key: &str) -> Option<&WitnessValue> {
        self.witness.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn witness_nat(&self, key: &str) -> Option<&Natural> {
        match self.witness(key) {
            Some(WitnessValue::Nat(v)) => Some(v),
            _ => None,
        }
    }
}
