
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numtheory::Natural;

/// Modular exponentiation `base^exp mod n` by square-and-multiply.
pub fn mod_pow(base: &Natural, exp: &Natural, n: &Natural) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::InvalidInput("modulus must be at least 1".into()));
    }
    Ok(base.modpow(exp, n))
}

/// Same operation, but counts every modular multiplication performed.
/// The attack benchmarks rely on these counters being deterministic.
pub(crate) fn mod_pow_counted(
    base: &Natural,
    exp: &Natural,
    n: &Natural,
    muls: &mut u64,
) -> Natural {
    if n.is_one() {
        return Natural::zero();
    }
    let mut result = Natural::one();
    let mut acc = base % n;
    for i in 0..exp.bits() {
        if exp.bit(i) {
            result = &result * &acc % n;
            *muls += 1;
        }
        if i + 1 < exp.bits() {
            acc = &acc * &acc % n;
            *muls += 1;
        }
    }
    result
}

/// Floor of the k-th root of x, with an exactness flag.
pub fn integer_kth_root(x: &Natural, k: u64) -> Result<(Natural, bool)> {
    if k == 0 {
        return Err(Error::InvalidInput("root index must be at least 1".into()));
    }
    if x.is_zero() || x.is_one() || k == 1 {
        return Ok((x.clone(), true));
    }
    // For k beyond the bit length the floor root of x >= 2 is always 1.
    if k >= x.bits() {
        return Ok((Natural::one(), false));
    }
    let root = x.nth_root(k as u32);
    let exact = root.pow(k as u32) == *x;
    Ok((root, exact))
}

/// Floor of the square root.
pub fn isqrt(x: &Natural) -> Natural {
    x.sqrt()
}

/// Ceiling of the square root.
pub fn isqrt_ceil(x: &Natural) -> Natural {
    let s = x.sqrt();
    if &s * &s == *x {
        s
    } else {
        s + 1u32
    }
}

/// Largest i with e^i <= n, i.e. the floor of log_e(n). Requires e >= 2.
pub fn ilog(e: &Natural, n: &Natural) -> u64 {
    debug_assert!(*e >= Natural::from(2u32));
    let mut power = e.clone();
    let mut i = 0u64;
    while power <= *n {
        power *= e;
        i += 1;
    }
    i
}

/// Exact divisibility count: the largest gamma with e^gamma dividing a exactly
/// down to 1, or None when a is not a pure power of e. a = 1 gives 0.
pub fn pure_power_exponent(e: &Natural, a: &Natural) -> Option<u64> {
    if a.is_zero() || *e < Natural::from(2u32) {
        return None;
    }
    let mut rest = a.clone();
    let mut gamma = 0u64;
    while !rest.is_one() {
        let (q, r) = rest.div_rem(e);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        gamma += 1;
    }
    Some(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn mod_pow_paper_values() {
        assert_eq!(mod_pow(&n(51), &n(7), &n(55)).unwrap(), n(6));
        assert_eq!(mod_pow(&n(7), &n(118), &n(143)).unwrap(), n(108));
    }

    #[test]
    fn mod_pow_exponent_one() {
        assert_eq!(mod_pow(&n(123), &n(1), &n(55)).unwrap(), n(123 % 55));
    }

    #[test]
    fn mod_pow_zero_modulus_rejected() {
        assert!(mod_pow(&n(2), &n(3), &n(0)).is_err());
    }

    #[test]
    fn counted_matches_modpow() {
        let mut muls = 0;
        for (b, e, m) in [(51u64, 7u64, 55u64), (7, 118, 143), (2, 1000, 997), (5, 0, 7)] {
            let got = mod_pow_counted(&n(b), &n(e), &n(m), &mut muls);
            assert_eq!(got, n(b).modpow(&n(e), &n(m)));
        }
        assert!(muls > 0);
    }

    #[test]
    fn kth_root_examples() {
        assert_eq!(integer_kth_root(&n(216), 3).unwrap(), (n(6), true));
        assert_eq!(integer_kth_root(&n(493), 2).unwrap(), (n(22), false));
        assert_eq!(integer_kth_root(&n(1), 7).unwrap(), (n(1), true));
        assert_eq!(integer_kth_root(&n(10), 64).unwrap(), (n(1), false));
        assert!(integer_kth_root(&n(5), 0).is_err());
    }

    #[test]
    fn ilog_bounds() {
        assert_eq!(ilog(&n(7), &n(143)), 2);
        assert_eq!(ilog(&n(2), &n(1)), 0);
        assert_eq!(ilog(&n(10), &n(10)), 1);
    }

    #[test]
    fn pure_powers() {
        assert_eq!(pure_power_exponent(&n(7), &n(49)), Some(2));
        assert_eq!(pure_power_exponent(&n(7), &n(1)), Some(0));
        assert_eq!(pure_power_exponent(&n(7), &n(14)), None);
        assert_eq!(pure_power_exponent(&n(2), &(Natural::from(1u8) << 64)), Some(64));
    }
}
