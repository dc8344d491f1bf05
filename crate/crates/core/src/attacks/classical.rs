use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attacks::outcome::{AttackOutcome, WitnessValue, Work};
use crate::error::{Error, Result};
use crate::numtheory::arith::{integer_kth_root, isqrt_ceil};
use crate::numtheory::euclid::{crt, ext_euclid, mod_inv, InverseStrategy};
use crate::numtheory::primality::is_prime;
use crate::numtheory::Natural;
use crate::rsa::keys::PublicKey;

/// Factor an odd composite by searching n = a^2 - b^2 upward from
/// a = ceil(sqrt(n)). Effective exactly when p and q lie close together.
pub fn fermat_factor(n: &Natural, max_steps: u64) -> Result<AttackOutcome> {
    if n < &Natural::from(9u32) || n.is_even() {
        return Err(Error::InvalidInput("fermat factoring needs an odd n >= 9".into()));
    }
    if is_prime(n) {
        return Err(Error::InvalidInput(format!("{n} is prime")));
    }
    let root = isqrt_ceil(n);
    if &root * &root == *n {
        return Err(Error::InvalidInput(format!("{n} is a square; equal factors are excluded")));
    }

    let mut n_plus = root;
    let mut steps = 0u64;
    while steps < max_steps {
        steps += 1;
        let square = &n_plus * &n_plus - n;
        let (n_minus, exact) = integer_kth_root(&square, 2)?;
        if exact {
            let p = &n_plus - &n_minus;
            let q = &n_plus + &n_minus;
            let work = Work { iterations: steps, ..Work::default() };
            return Ok(AttackOutcome::success(
                p.clone(),
                vec![
                    ("n_plus", WitnessValue::Nat(n_plus)),
                    ("n_minus", WitnessValue::Nat(n_minus)),
                    ("steps", WitnessValue::Nat(Natural::from(steps))),
                    ("p", WitnessValue::Nat(p)),
                    ("q", WitnessValue::Nat(q)),
                ],
                work,
            ));
        }
        n_plus += 1u32;
    }
    Ok(AttackOutcome::failure(
        vec![("steps", WitnessValue::Nat(Natural::from(steps)))],
        Work { iterations: steps, ..Work::default() },
    ))
}

/// Recover a plaintext by iterating the encryption map until the
/// ciphertext reappears; the previous element of the cycle is m.
pub fn iteration_attack(pk: &PublicKey, c: &Natural, max_steps: u64) -> Result<AttackOutcome> {
    if *c >= pk.n {
        return Err(Error::MessageTooLarge { value: c.clone(), modulus: pk.n.clone() });
    }
    let mut previous = c.clone();
    let mut current = c.modpow(&pk.e, &pk.n);
    let mut k = 1u64;
    while current != *c {
        if k >= max_steps {
            return Ok(AttackOutcome::failure(
                vec![("steps", WitnessValue::Nat(Natural::from(k)))],
                Work { iterations: k, ..Work::default() },
            ));
        }
        let next = current.modpow(&pk.e, &pk.n);
        previous = current;
        current = next;
        k += 1;
    }
    Ok(AttackOutcome::success(
        previous,
        vec![("period", WitnessValue::Nat(Natural::from(k)))],
        Work { iterations: k, ..Work::default() },
    ))
}

/// Recover a plaintext through a signing oracle by blinding the ciphertext
/// with s^e. When s is None a random unit mod n is drawn from the seed.
/// The oracle returning None counts as refusal and fails the attack.
pub fn blinding_attack<F>(
    pk: &PublicKey,
    c: &Natural,
    sign_oracle: F,
    s: Option<&Natural>,
    rng_seed: u64,
) -> Result<AttackOutcome>
where
    F: Fn(&Natural) -> Option<Natural>,
{
    if *c >= pk.n {
        return Err(Error::MessageTooLarge { value: c.clone(), modulus: pk.n.clone() });
    }
    let s = match s {
        Some(s) => {
            if !s.gcd(&pk.n).is_one() {
                return Err(Error::InvalidInput(format!("blind {s} is not a unit mod {}", pk.n)));
            }
            s.clone()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            loop {
                let candidate = rng.gen_biguint_range(&Natural::one(), &pk.n);
                if candidate.gcd(&pk.n).is_one() {
                    break candidate;
                }
            }
        }
    };
    let blinded = s.modpow(&pk.e, &pk.n) * c % &pk.n;
    let Some(reply) = sign_oracle(&blinded) else {
        return Ok(AttackOutcome::failure(
            vec![
                ("s", WitnessValue::Nat(s)),
                ("blinded", WitnessValue::Nat(blinded)),
                ("oracle", WitnessValue::Text("refused".into())),
            ],
            Work::default(),
        ));
    };
    let s_inv = mod_inv(&s, &pk.n, InverseStrategy::Euclid)?;
    let m = reply.clone() * s_inv % &pk.n;
    Ok(AttackOutcome::success(
        m,
        vec![
            ("s", WitnessValue::Nat(s)),
            ("blinded", WitnessValue::Nat(blinded)),
            ("reply", WitnessValue::Nat(reply)),
        ],
        Work::default(),
    ))
}

/// Recover m from two encryptions under coprime exponents sharing one
/// modulus: combine x1*e1 + x2*e2 = 1 with x2 < 0, invert c2, and form
/// c1^x1 * y^(-x2).
pub fn common_modulus_attack(
    e1: &Natural,
    e2: &Natural,
    n: &Natural,
    c1: &Natural,
    c2: &Natural,
) -> Result<AttackOutcome> {
    if c1 >= n || c2 >= n {
        return Err(Error::MessageTooLarge {
            value: c1.max(c2).clone(),
            modulus: n.clone(),
        });
    }
    let ext = ext_euclid(e1, e2)?;
    if !ext.g.is_one() {
        return Err(Error::InvalidInput(format!(
            "exponents {e1} and {e2} share the factor {}",
            ext.g
        )));
    }
    // Arrange indices so the second coefficient is the non-positive one.
    let (x1, x2, ca, cb) = if ext.x1.is_positive() {
        (ext.x1, ext.x0, c2, c1)
    } else {
        (ext.x0, ext.x1, c1, c2)
    };

    let y = if x2.is_zero() {
        Natural::one()
    } else {
        let g = cb.gcd(n);
        if !g.is_one() {
            // The gcd is a proper factor of n: report it instead of m.
            return Ok(AttackOutcome::failure(
                vec![
                    ("x1", WitnessValue::Int(x1)),
                    ("x2", WitnessValue::Int(x2)),
                    ("factor", WitnessValue::Nat(g)),
                ],
                Work::default(),
            ));
        }
        mod_inv(cb, n, InverseStrategy::Euclid)?
    };

    let x1_nat = x1.to_biguint().ok_or_else(|| {
        Error::InvalidInput("positive coefficient expected from the euclid arrangement".into())
    })?;
    let neg_x2 = (-&x2).to_biguint().unwrap_or_default();
    let m = ca.modpow(&x1_nat, n) * y.modpow(&neg_x2, n) % n;
    Ok(AttackOutcome::success(
        m,
        vec![
            ("x1", WitnessValue::Int(x1)),
            ("x2", WitnessValue::Int(x2)),
            ("y", WitnessValue::Nat(y)),
        ],
        Work::default(),
    ))
}

/// Low-exponent broadcast: combine ciphertexts of one message under at
/// least e pairwise-coprime moduli with the CRT and take the exact e-th
/// root of the combined value.
pub fn broadcast_attack(
    public_keys: &[(Natural, Natural)],
    ciphertexts: &[Natural],
) -> Result<AttackOutcome> {
    if public_keys.is_empty() || public_keys.len() != ciphertexts.len() {
        return Err(Error::InvalidInput(
            "need one ciphertext per public key, at least one of each".into(),
        ));
    }
    let e = &public_keys[0].0;
    if public_keys.iter().any(|(ei, _)| ei != e) {
        return Err(Error::InvalidInput("all keys must share one exponent".into()));
    }
    let e_u64 = u64::try_from(e)
        .map_err(|_| Error::InvalidInput(format!("exponent {e} is beyond root extraction range")))?;
    if (public_keys.len() as u64) < e_u64 {
        return Err(Error::InvalidInput(format!(
            "{} shares cannot cover exponent {e}; at least {e} are required",
            public_keys.len()
        )));
    }
    for ((_, n_i), c_i) in public_keys.iter().zip(ciphertexts) {
        if c_i >= n_i {
            return Err(Error::MessageTooLarge { value: c_i.clone(), modulus: n_i.clone() });
        }
    }
    let moduli: Vec<Natural> = public_keys.iter().map(|(_, n_i)| n_i.clone()).collect();
    let combined = crt(ciphertexts, &moduli)?;
    let (root, exact) = integer_kth_root(&combined, e_u64)?;
    if exact {
        Ok(AttackOutcome::success(
            root.clone(),
            vec![
                ("combined", WitnessValue::Nat(combined)),
                ("root", WitnessValue::Nat(root)),
            ],
            Work::default(),
        ))
    } else {
        Ok(AttackOutcome::failure(
            vec![
                ("combined", WitnessValue::Nat(combined)),
                ("root", WitnessValue::Nat(root)),
            ],
            Work::default(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsa::keys::{encrypt, PrivateKey, PublicKey};
    use num_bigint::BigInt;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn fermat_golden() {
        let out = fermat_factor(&n(493), 100).unwrap();
        assert!(out.success);
        assert_eq!(out.recovered, Some(n(17)));
        assert_eq!(out.witness_nat("n_plus"), Some(&n(23)));
        assert_eq!(out.witness_nat("n_minus"), Some(&n(6)));
        assert_eq!(out.witness_nat("steps"), Some(&n(1)));

        let out = fermat_factor(&n(143), 100).unwrap();
        assert_eq!(out.recovered, Some(n(11)));
        assert_eq!(out.witness_nat("n_plus"), Some(&n(12)));
        assert_eq!(out.witness_nat("n_minus"), Some(&n(1)));

        let out = fermat_factor(&n(15), 100).unwrap();
        assert_eq!(out.recovered, Some(n(3)));
        assert_eq!(out.witness_nat("n_plus"), Some(&n(4)));
    }

    #[test]
    fn fermat_domain_errors() {
        assert!(fermat_factor(&n(17), 100).is_err()); // prime
        assert!(fermat_factor(&n(100), 100).is_err()); // even
        assert!(fermat_factor(&n(7), 100).is_err()); // too small
        assert!(fermat_factor(&n(25), 100).is_err()); // square
    }

    #[test]
    fn fermat_budget_is_failure_not_error() {
        // 11 * 101: (p+q)/2 - ceil(sqrt(n)) + 1 = 56 - 34 + 1 = 23 steps.
        let out = fermat_factor(&n(1111), 5).unwrap();
        assert!(!out.success);
        let out = fermat_factor(&n(1111), 23).unwrap();
        assert!(out.success);
        assert_eq!(out.witness_nat("steps"), Some(&n(23)));
    }

    #[test]
    fn iteration_golden() {
        let pk = PublicKey { e: n(7), n: n(55) };
        let out = iteration_attack(&pk, &n(6), 100).unwrap();
        assert_eq!(out.recovered, Some(n(51)));
        assert_eq!(out.witness_nat("period"), Some(&n(4)));

        let out = iteration_attack(&pk, &n(23), 100).unwrap();
        assert_eq!(out.recovered, Some(n(12)));
        assert_eq!(out.witness_nat("period"), Some(&n(2)));

        let out = iteration_attack(&pk, &n(34), 100).unwrap();
        assert_eq!(out.recovered, Some(n(34)));
        assert_eq!(out.witness_nat("period"), Some(&n(1)));
    }

    #[test]
    fn iteration_budget() {
        let pk = PublicKey { e: n(7), n: n(55) };
        let out = iteration_attack(&pk, &n(6), 2).unwrap();
        assert!(!out.success);
    }

    #[test]
    fn blinding_golden() {
        let pk = PublicKey { e: n(3), n: n(493) };
        let sk = PrivateKey { d: n(75), n: n(493) };
        let c = encrypt(&pk, &n(47)).unwrap();
        let oracle = |x: &Natural| Some(x.modpow(&sk.d, &sk.n));
        let out = blinding_attack(&pk, &c, oracle, Some(&n(2)), 0).unwrap();
        assert_eq!(out.recovered, Some(n(47)));

        // Degenerate blind s = 1 hands back the oracle reply directly.
        let out = blinding_attack(&pk, &c, oracle, Some(&n(1)), 0).unwrap();
        assert_eq!(out.recovered, Some(n(47)));

        // Random blind drawn from the seed.
        let out = blinding_attack(&pk, &c, oracle, None, 7).unwrap();
        assert_eq!(out.recovered, Some(n(47)));
    }

    #[test]
    fn blinding_refusal() {
        let pk = PublicKey { e: n(3), n: n(493) };
        let out = blinding_attack(&pk, &n(100), |_| None, Some(&n(2)), 0).unwrap();
        assert!(!out.success);
    }

    #[test]
    fn common_modulus_golden() {
        let out = common_modulus_attack(&n(3), &n(5), &n(493), &n(293), &n(421)).unwrap();
        assert_eq!(out.recovered, Some(n(47)));
        assert_eq!(out.witness("x1"), Some(&WitnessValue::Int(BigInt::from(2))));
        assert_eq!(out.witness("x2"), Some(&WitnessValue::Int(BigInt::from(-1))));
        assert_eq!(out.witness_nat("y"), Some(&n(89)));
        // Intermediate products quoted with the procedure.
        assert_eq!(n(293).modpow(&n(2), &n(493)), n(67));
        assert_eq!(n(67) * n(89) % n(493), n(47));
    }

    #[test]
    fn common_modulus_trivial_exponent() {
        let out = common_modulus_attack(&n(1), &n(5), &n(493), &n(47), &n(421)).unwrap();
        assert_eq!(out.recovered, Some(n(47)));
    }

    #[test]
    fn common_modulus_shared_factor_rejected() {
        assert!(common_modulus_attack(&n(3), &n(9), &n(493), &n(1), &n(2)).is_err());
    }

    #[test]
    fn common_modulus_non_unit_ciphertext_leaks_factor() {
        // c2 = 17 shares a factor with 493 = 17 * 29.
        let out = common_modulus_attack(&n(3), &n(5), &n(493), &n(293), &n(17)).unwrap();
        assert!(!out.success);
        assert_eq!(out.witness_nat("factor"), Some(&n(17)));
    }

    #[test]
    fn broadcast_golden() {
        let keys = vec![(n(3), n(55)), (n(3), n(203)), (n(3), n(391))];
        let cts = vec![n(51), n(13), n(216)];
        let out = broadcast_attack(&keys, &cts).unwrap();
        assert_eq!(out.recovered, Some(n(6)));
    }

    #[test]
    fn broadcast_all_ones() {
        let keys = vec![(n(3), n(55)), (n(3), n(203)), (n(3), n(391))];
        let out = broadcast_attack(&keys, &[n(1), n(1), n(1)]).unwrap();
        assert_eq!(out.recovered, Some(n(1)));
    }

    #[test]
    fn broadcast_oversized_message_fails() {
        // m^3 exceeds the product of the moduli, so the root is inexact.
        let keys = vec![(n(3), n(55)), (n(3), n(203)), (n(3), n(391))];
        let m = n(1700); // 1700^3 > 55 * 203 * 391
        let cts: Vec<Natural> = keys
            .iter()
            .map(|(e, n_i)| m.modpow(e, n_i))
            .collect();
        let out = broadcast_attack(&keys, &cts).unwrap();
        assert!(!out.success);
    }

    #[test]
    fn broadcast_preconditions() {
        let keys = vec![(n(3), n(55)), (n(3), n(203))];
        assert!(broadcast_attack(&keys, &[n(1), n(1)]).is_err()); // too few shares
        let keys = vec![(n(3), n(55)), (n(3), n(35)), (n(3), n(391))];
        match broadcast_attack(&keys, &[n(1), n(1), n(1)]) {
            Err(Error::NonCoprimeModuli { gcd, .. }) => assert_eq!(gcd, n(5)),
            other => panic!("expected NonCoprimeModuli, got {other:?}"),
        }
    }
}
