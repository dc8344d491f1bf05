use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numtheory::Natural;

/// Below this value the fixed witness set decides primality exactly.
const DETERMINISTIC_BOUND: u64 = 330_000_000_000_000; // 3.3 * 10^14

/// Witnesses that are exact for everything below the deterministic bound.
const SMALL_WITNESSES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];

/// Rounds of randomized Miller-Rabin above the bound; error < 2^-80.
const RANDOM_ROUNDS: usize = 40;

/// Miller-Rabin primality test. Deterministic below 3.3*10^14; above that,
/// witnesses come from a rng seeded from the input so reruns agree.
pub fn is_prime(n: &Natural) -> bool {
    let two = Natural::from(2u32);
    if *n < two {
        return false;
    }
    if n.is_even() {
        return *n == two;
    }
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = Natural::from(p);
        if *n == p {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }

    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n - 1 is nonzero");
    let d = &n_minus_1 >> s;

    let passes = |a: &Natural| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };

    if *n < Natural::from(DETERMINISTIC_BOUND) {
        SMALL_WITNESSES.iter().all(|&a| passes(&Natural::from(a)))
    } else {
        let mut seed = 0x7261795f666f7267u64; // constant tag
        for digit in n.iter_u64_digits() {
            seed ^= digit.rotate_left(17);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let low = two;
        let high = n_minus_1.clone();
        (0..RANDOM_ROUNDS).all(|_| passes(&rng.gen_biguint_range(&low, &high)))
    }
}

/// Smallest prime strictly greater than n.
pub fn next_prime(n: &Natural) -> Natural {
    let two = Natural::from(2u32);
    if *n < two {
        return two;
    }
    let mut candidate = if n.is_even() { n + 1u32 } else { n + 2u32 };
    while !is_prime(&candidate) {
        candidate += 2u32;
    }
    candidate
}

/// Random prime with exactly `bits` bits; deterministic for a fixed seed.
pub fn gen_prime(bits: u32, rng_seed: u64) -> Result<Natural> {
    if bits < 2 {
        return Err(Error::InvalidInput("prime generation requires bits >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    gen_prime_with(bits, &mut rng)
}

pub(crate) fn gen_prime_with(bits: u32, rng: &mut ChaCha8Rng) -> Result<Natural> {
    let low = Natural::one() << (bits - 1) as usize;
    let high = Natural::one() << bits as usize;
    for _ in 0..200_000u32 {
        let mut candidate = rng.gen_biguint_range(&low, &high);
        if candidate.is_even() && candidate != Natural::from(2u32) {
            candidate += 1u32;
            if candidate >= high {
                continue;
            }
        }
        if is_prime(&candidate) {
            return Ok(candidate);
        }
    }
    Err(Error::BudgetExhausted(format!("searching a {bits}-bit prime")))
}

/// A prime p is doubly safe when (p-1)/2 and (p-3)/4 are prime as well,
/// with both divisions exact.
pub fn is_doubly_safe(p: &Natural) -> bool {
    if !is_prime(p) {
        return false;
    }
    if *p < Natural::from(11u32) {
        return false;
    }
    let p_minus_1 = p - 1u32;
    let p_minus_3 = p - 3u32;
    if !(&p_minus_1 % 2u32).is_zero() || !(&p_minus_3 % 4u32).is_zero() {
        return false;
    }
    is_prime(&(p_minus_1 / 2u32)) && is_prime(&(p_minus_3 / 4u32))
}

/// Random doubly safe prime with exactly `bits` bits.
pub fn gen_doubly_safe_prime(bits: u32, rng_seed: u64) -> Result<Natural> {
    if bits < 4 {
        return Err(Error::InvalidInput("doubly safe primes need bits >= 4".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    gen_doubly_safe_prime_with(bits, &mut rng)
}

pub(crate) fn gen_doubly_safe_prime_with(bits: u32, rng: &mut ChaCha8Rng) -> Result<Natural> {
    let low = Natural::one() << (bits - 1) as usize;
    let high = Natural::one() << bits as usize;
    // Every doubly safe prime except 11 is -1 mod 24, so walk that residue
    // class from a random start.
    for _ in 0..200_000u32 {
        let start = rng.gen_biguint_range(&low, &high);
        let to_next = (Natural::from(23u32) + 24u32 - &start % 24u32) % 24u32;
        let mut candidate = &start + to_next;
        for _ in 0..64u32 {
            if candidate >= high {
                break;
            }
            if is_doubly_safe(&candidate) {
                return Ok(candidate);
            }
            candidate += 24u32;
        }
        // 11 is the one doubly safe prime off the 24a-1 grid.
        let eleven = Natural::from(11u32);
        if low <= eleven && eleven < high {
            return Ok(eleven);
        }
    }
    Err(Error::BudgetExhausted(format!("searching a {bits}-bit doubly safe prime")))
}
