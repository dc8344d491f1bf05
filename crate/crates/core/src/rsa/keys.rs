use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numtheory::euclid::{mod_inv, InverseStrategy};
use crate::numtheory::primality::{gen_doubly_safe_prime_with, gen_prime_with, is_prime};
use crate::numtheory::Natural;

/// A full RSA key system: the four-tuple (e, d, p, q) together with the
/// derived modulus n = pq and lambda(n) = lcm(p-1, q-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySystem {
    e: Natural,
    d: Natural,
    p: Natural,
    q: Natural,
    n: Natural,
    lambda_n: Natural,
}

/// Published half of a key system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub e: Natural,
    pub n: Natural,
}

/// Secret half of a key system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    pub d: Natural,
    pub n: Natural,
}

impl KeySystem {
    /// Validate and assemble a key system from its four parameters.
    pub fn new(e: Natural, d: Natural, p: Natural, q: Natural) -> Result<Self> {
        if p == q {
            return Err(Error::InvalidInput("p and q must be distinct".into()));
        }
        if !is_prime(&p) {
            return Err(Error::InvalidInput(format!("p = {p} is not prime")));
        }
        if !is_prime(&q) {
            return Err(Error::InvalidInput(format!("q = {q} is not prime")));
        }
        let n = &p * &q;
        let lambda_n = (&p - 1u32).lcm(&(&q - 1u32));
        if e.is_zero() || e >= lambda_n || d.is_zero() || d >= lambda_n {
            return Err(Error::InvalidInput(format!(
                "exponents must lie strictly between 0 and lambda(n) = {lambda_n}"
            )));
        }
        if !(&e * &d % &lambda_n).is_one() {
            return Err(Error::InvalidInput(format!(
                "e*d = {} is not 1 mod lambda(n) = {lambda_n}",
                &e * &d
            )));
        }
        Ok(Self { e, d, p, q, n, lambda_n })
    }

    pub fn e(&self) -> &Natural {
        &self.e
    }
    pub fn d(&self) -> &Natural {
        &self.d
    }
    pub fn p(&self) -> &Natural {
        &self.p
    }
    pub fn q(&self) -> &Natural {
        &self.q
    }
    pub fn n(&self) -> &Natural {
        &self.n
    }
    pub fn lambda_n(&self) -> &Natural {
        &self.lambda_n
    }

    pub fn public_key(&self) -> PublicKey {
        PublicKey { e: self.e.clone(), n: self.n.clone() }
    }

    pub fn private_key(&self) -> PrivateKey {
        PrivateKey { d: self.d.clone(), n: self.n.clone() }
    }
}

/// Options for key generation.
#[derive(Debug, Clone, Default)]
pub struct KeygenOptions {
    /// Force p and q to be doubly safe primes.
    pub doubly_safe: bool,
    /// Fix the encryption exponent and derive d from it instead of the
    /// usual draw-d-then-invert order.
    pub fixed_e: Option<Natural>,
}

/// Generate a key system with primes of `bits_per_prime` bits.
///
/// d is drawn at random close to lambda(n) and e is its inverse; with a
/// fixed e the roles are swapped. Fully deterministic for a given seed.
pub fn keygen(bits_per_prime: u32, rng_seed: u64, options: &KeygenOptions) -> Result<KeySystem> {
    if bits_per_prime < 4 {
        return Err(Error::InvalidInput("keygen requires bits_per_prime >= 4".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let draw = |rng: &mut ChaCha8Rng| -> Result<Natural> {
        if options.doubly_safe {
            gen_doubly_safe_prime_with(bits_per_prime, rng)
        } else {
            gen_prime_with(bits_per_prime, rng)
        }
    };
    let p = draw(&mut rng)?;
    let mut q = draw(&mut rng)?;
    for _ in 0..10_000u32 {
        if q != p {
            break;
        }
        q = draw(&mut rng)?;
    }
    if q == p {
        return Err(Error::BudgetExhausted(format!(
            "searching a second distinct {bits_per_prime}-bit prime"
        )));
    }
    let lambda_n = (&p - 1u32).lcm(&(&q - 1u32));

    let (e, d) = match &options.fixed_e {
        Some(e) => {
            let g = e.gcd(&lambda_n);
            if !g.is_one() {
                return Err(Error::InvalidExponent { e: e.clone(), gcd: g });
            }
            let d = mod_inv(e, &lambda_n, InverseStrategy::Euclid)?;
            (e.clone(), d)
        }
        None => {
            let low = &lambda_n >> 1;
            let mut d = Natural::zero();
            for _ in 0..100_000u32 {
                let candidate = rng.gen_biguint_range(&low, &lambda_n);
                if candidate.gcd(&lambda_n).is_one() {
                    d = candidate;
                    break;
                }
            }
            if d.is_zero() {
                return Err(Error::BudgetExhausted("searching d coprime to lambda(n)".into()));
            }
            let e = mod_inv(&d, &lambda_n, InverseStrategy::Euclid)?;
            (e, d)
        }
    };
    KeySystem::new(e, d, p, q)
}

/// E(m) = m^e mod n.
pub fn encrypt(pk: &PublicKey, m: &Natural) -> Result<Natural> {
    if *m >= pk.n {
        return Err(Error::MessageTooLarge { value: m.clone(), modulus: pk.n.clone() });
    }
    Ok(m.modpow(&pk.e, &pk.n))
}

/// D(c) = c^d mod n.
pub fn decrypt(sk: &PrivateKey, c: &Natural) -> Result<Natural> {
    if *c >= sk.n {
        return Err(Error::MessageTooLarge { value: c.clone(), modulus: sk.n.clone() });
    }
    Ok(c.modpow(&sk.d, &sk.n))
}

/// Signing is decryption applied to the message.
pub fn sign(sk: &PrivateKey, m: &Natural) -> Result<Natural> {
    decrypt(sk, m)
}

/// Verification recovers sig^e and compares it with the message.
pub fn verify(pk: &PublicKey, m: &Natural, sig: &Natural) -> Result<bool> {
    if *m >= pk.n {
        return Err(Error::MessageTooLarge { value: m.clone(), modulus: pk.n.clone() });
    }
    Ok(encrypt(pk, sig)? == *m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn validates_published_examples() {
        let ks = KeySystem::new(n(11), n(35), n(13), n(17)).unwrap();
        assert_eq!(ks.n(), &n(221));
        assert_eq!(ks.lambda_n(), &n(48));
        let ks = KeySystem::new(n(47), n(23), n(11), n(13)).unwrap();
        assert_eq!(ks.lambda_n(), &n(60));
    }

    #[test]
    fn rejects_broken_tuples() {
        assert!(KeySystem::new(n(11), n(35), n(13), n(13)).is_err());
        assert!(KeySystem::new(n(11), n(35), n(12), n(17)).is_err());
        assert!(KeySystem::new(n(11), n(36), n(13), n(17)).is_err());
        assert!(KeySystem::new(n(11), n(0), n(13), n(17)).is_err());
        assert!(KeySystem::new(n(49), n(97), n(13), n(17)).is_err());
    }

    #[test]
    fn keygen_is_deterministic() {
        let opts = KeygenOptions::default();
        let a = keygen(12, 99, &opts).unwrap();
        let b = keygen(12, 99, &opts).unwrap();
        assert_eq!(a, b);
        let c = keygen(12, 100, &opts).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn keygen_fixed_e() {
        let opts = KeygenOptions { doubly_safe: false, fixed_e: Some(n(17)) };
        let ks = keygen(12, 5, &opts).unwrap();
        assert_eq!(ks.e(), &n(17));
        let bad = KeygenOptions { doubly_safe: false, fixed_e: Some(n(2)) };
        match keygen(12, 5, &bad) {
            Err(Error::InvalidExponent { gcd, .. }) => assert_eq!(gcd, n(2)),
            other => panic!("expected InvalidExponent, got {other:?}"),
        }
    }

    #[test]
    fn keygen_doubly_safe() {
        let opts = KeygenOptions { doubly_safe: true, fixed_e: None };
        let ks = keygen(11, 3, &opts).unwrap();
        assert!(crate::numtheory::is_doubly_safe(ks.p()));
        assert!(crate::numtheory::is_doubly_safe(ks.q()));
    }

    #[test]
    fn encrypt_decrypt_golden() {
        let pk3 = PublicKey { e: n(3), n: n(493) };
        let pk5 = PublicKey { e: n(5), n: n(493) };
        assert_eq!(encrypt(&pk3, &n(47)).unwrap(), n(293));
        assert_eq!(encrypt(&pk5, &n(47)).unwrap(), n(421));
        assert_eq!(encrypt(&pk3, &n(0)).unwrap(), n(0));
        let sk = PrivateKey { d: n(75), n: n(493) };
        assert_eq!(decrypt(&sk, &n(293)).unwrap(), n(47));
    }

    #[test]
    fn message_too_large() {
        let pk = PublicKey { e: n(3), n: n(493) };
        assert!(matches!(encrypt(&pk, &n(493)), Err(Error::MessageTooLarge { .. })));
    }

    #[test]
    fn sign_verify_roundtrip() {
        let sk = PrivateKey { d: n(75), n: n(493) };
        let pk = PublicKey { e: n(3), n: n(493) };
        let sig = sign(&sk, &n(47)).unwrap();
        assert_eq!(sig.modpow(&n(3), &n(493)), n(47));
        assert!(verify(&pk, &n(47), &sig).unwrap());
        let tampered = if sig.is_even() { &sig + 1u32 } else { &sig - 1u32 };
        assert!(!verify(&pk, &n(47), &tampered).unwrap());
    }
}
