use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attacks::outcome::{AttackOutcome, WitnessValue, Work};
use crate::error::{Error, Result};
use crate::numtheory::order::omega;
use crate::numtheory::Natural;

/// Cap on the emitted candidate list.
const CANDIDATE_CAP: usize = 4096;

/// Recover a working decryption exponent from (e, n) alone through the
/// iterated order function: with w = omega_e(a * omega_e(n)),
/// d = e^(b*w - 1) mod a*omega_e(n) inverts e modulo a*omega_e(n).
/// The full-range candidates d + k*a*omega_e(n) < n are emitted and each is
/// probe-tested for m^(e*d) = m mod n.
pub fn direct_omega_attack(
    e: &Natural,
    n: &Natural,
    a: &Natural,
    b: &Natural,
    probe_seed: u64,
) -> Result<AttackOutcome> {
    if *n <= Natural::one() {
        return Err(Error::InvalidInput("attack requires n > 1".into()));
    }
    let g = e.gcd(n);
    if !g.is_one() {
        return Err(Error::InvalidInput(format!("gcd(e, n) = {g} must be 1")));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("a and b must be at least 1".into()));
    }

    if e.is_one() {
        // The identity exponent is its own inverse.
        return Ok(AttackOutcome::success(
            Natural::one(),
            vec![
                ("omega_n", WitnessValue::Nat(Natural::one())),
                ("modulus", WitnessValue::Nat(a.clone())),
                ("omega_modulus", WitnessValue::Nat(Natural::one())),
                ("candidates", WitnessValue::Nats(vec![Natural::one()])),
                ("validated", WitnessValue::Nats(vec![Natural::one()])),
            ],
            Work::default(),
        ));
    }

    let omega_n = omega(e, n)?;
    let modulus = a * &omega_n;
    let omega_modulus = omega(e, &modulus)?;
    if omega_modulus.is_zero() {
        return Ok(AttackOutcome::failure(
            vec![
                ("omega_n", WitnessValue::Nat(omega_n)),
                ("modulus", WitnessValue::Nat(modulus)),
                ("omega_modulus", WitnessValue::Nat(Natural::zero())),
            ],
            Work::default(),
        ));
    }

    let exponent = b * &omega_modulus - 1u32;
    let d = e.modpow(&exponent, &modulus);
    debug_assert!((&d * e % &modulus).is_one());

    let mut candidates = Vec::new();
    let mut candidate = d.clone();
    while candidate < *n && candidates.len() < CANDIDATE_CAP {
        if !candidate.is_zero() {
            candidates.push(candidate.clone());
        }
        candidate += &modulus;
    }

    // Probe which candidates actually decrypt: m^(e*d) = m for sampled m.
    let mut rng = ChaCha8Rng::seed_from_u64(probe_seed);
    let probe_low = if *n > Natural::from(3u32) { Natural::from(2u32) } else { Natural::zero() };
    let probes: Vec<Natural> = (0..8)
        .map(|_| rng.gen_biguint_range(&probe_low, n))
        .collect();
    let validated: Vec<Natural> = candidates
        .iter()
        .filter(|cand| {
            probes
                .iter()
                .all(|m| m.modpow(e, n).modpow(cand, n) == *m)
        })
        .cloned()
        .collect();

    Ok(AttackOutcome::success(
        d,
        vec![
            ("omega_n", WitnessValue::Nat(omega_n)),
            ("modulus", WitnessValue::Nat(modulus)),
            ("omega_modulus", WitnessValue::Nat(omega_modulus)),
            ("candidates", WitnessValue::Nats(candidates)),
            ("validated", WitnessValue::Nats(validated)),
        ],
        Work::default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn nats(vs: &[u64]) -> WitnessValue {
        WitnessValue::Nats(vs.iter().map(|v| n(*v)).collect())
    }

    #[test]
    fn golden_221() {
        let out = direct_omega_attack(&n(11), &n(221), &n(1), &n(1), 0).unwrap();
        assert!(out.success);
        assert_eq!(out.recovered, Some(n(35)));
        assert_eq!(out.witness_nat("omega_n"), Some(&n(48)));
        assert_eq!(out.witness_nat("omega_modulus"), Some(&n(4)));
        assert_eq!(out.witness("candidates"), Some(&nats(&[35, 83, 131, 179])));
        // All candidates are congruent mod lambda(221) = 48, so all decrypt.
        assert_eq!(out.witness("validated"), Some(&nats(&[35, 83, 131, 179])));
    }

    #[test]
    fn golden_143_with_multipliers() {
        let out = direct_omega_attack(&n(47), &n(143), &n(2), &n(3), 0).unwrap();
        assert!(out.success);
        assert_eq!(out.recovered, Some(n(23)));
        assert_eq!(out.witness_nat("omega_n"), Some(&n(20)));
        assert_eq!(out.witness_nat("modulus"), Some(&n(40)));
        assert_eq!(out.witness_nat("omega_modulus"), Some(&n(4)));
        // 47^11 mod 40 = 23 and only d = 23 survives probing.
        assert_eq!(out.witness("validated"), Some(&nats(&[23])));
    }

    #[test]
    fn identity_exponent() {
        let out = direct_omega_attack(&n(1), &n(221), &n(1), &n(1), 0).unwrap();
        assert_eq!(out.recovered, Some(n(1)));
    }

    #[test]
    fn rejects_shared_factor() {
        assert!(direct_omega_attack(&n(13), &n(221), &n(1), &n(1), 0).is_err());
    }

    #[test]
    fn failure_when_tower_collapses() {
        // e = 5, n = 11: omega_5(11) = 5, and omega_5(5) = 0.
        let out = direct_omega_attack(&n(5), &n(11), &n(1), &n(1), 0).unwrap();
        assert!(!out.success);
        assert_eq!(out.witness_nat("omega_modulus"), Some(&n(0)));
    }
}
