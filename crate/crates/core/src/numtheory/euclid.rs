use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numtheory::factor::factorize;
use crate::numtheory::Natural;

/// Result of the extended Euclidean algorithm:
/// `g = x0 * a + x1 * b` with `g = gcd(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtGcdResult {
    pub g: Natural,
    pub x0: BigInt,
    pub x1: BigInt,
}

/// Extended Euclidean algorithm on naturals.
/// The coefficients are the canonical minimal ones produced by the
/// classical iteration.
pub fn ext_euclid(a: &Natural, b: &Natural) -> Result<ExtGcdResult> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("gcd(0, 0) is undefined".into()));
    }
    let mut r0 = BigInt::from_biguint(Sign::Plus, a.clone());
    let mut r1 = BigInt::from_biguint(Sign::Plus, b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    Ok(ExtGcdResult {
        g: r0.to_biguint().expect("gcd of naturals is non-negative"),
        x0: s0,
        x1: t0,
    })
}

/// Strategy for computing a modular inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseStrategy {
    /// Extended Euclidean algorithm.
    Euclid,
    /// a^(lambda(n) - 1) mod n; requires n to be factorable.
    LambdaPower,
}

/// Multiplicative inverse of a mod n, canonical in (0, n).
pub fn mod_inv(a: &Natural, n: &Natural, strategy: InverseStrategy) -> Result<Natural> {
    if *n < Natural::from(2u32) {
        return Err(Error::InvalidInput("modulus must be at least 2".into()));
    }
    let g = a.gcd(n);
    if !g.is_one() {
        return Err(Error::NotInvertible { a: a.clone(), n: n.clone(), gcd: g });
    }
    match strategy {
        InverseStrategy::Euclid => {
            let ext = ext_euclid(a, n)?;
            Ok(canonical_mod(&ext.x0, n))
        }
        InverseStrategy::LambdaPower => {
            let lambda = factorize(n)?.lambda();
            Ok(a.modpow(&(lambda - 1u32), n))
        }
    }
}

/// Reduce a signed integer into [0, n).
pub fn canonical_mod(x: &BigInt, n: &Natural) -> Natural {
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut r = x % &n_int;
    if r.is_negative() {
        r += &n_int;
    }
    r.to_biguint().expect("canonical residue is non-negative")
}

/// Chinese remainder theorem for pairwise coprime moduli, each at least 2.
pub fn crt(residues: &[Natural], moduli: &[Natural]) -> Result<Natural> {
    if residues.is_empty() || residues.len() != moduli.len() {
        return Err(Error::InvalidInput(
            "residues and moduli must be non-empty sequences of equal length".into(),
        ));
    }
    for (i, m) in moduli.iter().enumerate() {
        if *m < Natural::from(2u32) {
            return Err(Error::InvalidInput(format!("modulus at position {i} is below 2")));
        }
        for (j, m2) in moduli.iter().enumerate().skip(i + 1) {
            let g = m.gcd(m2);
            if !g.is_one() {
                return Err(Error::NonCoprimeModuli { i, j, gcd: g });
            }
        }
    }
    let product: Natural = moduli.iter().product();
    let mut acc = BigInt::zero();
    let product_int = BigInt::from_biguint(Sign::Plus, product.clone());
    for (r, m) in residues.iter().zip(moduli) {
        let others = &product / m;
        let inv = mod_inv(&(&others % m), m, InverseStrategy::Euclid)?;
        acc += BigInt::from_biguint(Sign::Plus, (r % m) * others * inv);
        acc %= &product_int;
    }
    Ok(canonical_mod(&acc, &product))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn ext_euclid_coefficients() {
        let r = ext_euclid(&n(108), &n(143)).unwrap();
        assert_eq!(r.g, n(1));
        assert_eq!(r.x0, BigInt::from(49));
        assert_eq!(r.x1, BigInt::from(-37));

        let r = ext_euclid(&n(421), &n(493)).unwrap();
        assert_eq!((r.g, r.x0, r.x1), (n(1), BigInt::from(89), BigInt::from(-76)));

        let r = ext_euclid(&n(0), &n(5)).unwrap();
        assert_eq!((r.g, r.x0, r.x1), (n(5), BigInt::zero(), BigInt::one()));
    }

    #[test]
    fn ext_euclid_rejects_double_zero() {
        assert!(ext_euclid(&n(0), &n(0)).is_err());
    }

    #[test]
    fn inverse_both_strategies() {
        assert_eq!(mod_inv(&n(108), &n(143), InverseStrategy::Euclid).unwrap(), n(49));
        assert_eq!(mod_inv(&n(11), &n(65520), InverseStrategy::LambdaPower).unwrap(), n(47651));
        assert_eq!(mod_inv(&n(1), &n(97), InverseStrategy::Euclid).unwrap(), n(1));
        assert_eq!(mod_inv(&n(1), &n(97), InverseStrategy::LambdaPower).unwrap(), n(1));
    }

    #[test]
    fn inverse_carries_gcd() {
        match mod_inv(&n(6), &n(9), InverseStrategy::Euclid) {
            Err(Error::NotInvertible { gcd, .. }) => assert_eq!(gcd, n(3)),
            other => panic!("expected NotInvertible, got {other:?}"),
        }
    }

    #[test]
    fn crt_examples() {
        let x = crt(&[n(51), n(13), n(216)], &[n(55), n(203), n(391)]).unwrap();
        assert_eq!(x, n(216));
        assert_eq!(crt(&[n(7)], &[n(5)]).unwrap(), n(2));
        assert_eq!(crt(&[n(0), n(0)], &[n(3), n(5)]).unwrap(), n(0));
    }

    #[test]
    fn crt_names_offending_pair() {
        match crt(&[n(1), n(2), n(3)], &[n(4), n(9), n(6)]) {
            Err(Error::NonCoprimeModuli { i, j, gcd }) => {
                assert_eq!((i, j), (0, 2));
                assert_eq!(gcd, n(2));
            }
            other => panic!("expected NonCoprimeModuli, got {other:?}"),
        }
    }
}
