use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attacks::outcome::{AttackOutcome, WitnessValue, Work};
use crate::error::{Error, Result};
use crate::numtheory::arith::{ilog, integer_kth_root, isqrt, mod_pow_counted, pure_power_exponent};
use crate::numtheory::euclid::{mod_inv, InverseStrategy};
use crate::numtheory::primality::is_prime;
use crate::numtheory::Natural;

/// Scan direction for successive ray guesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RayDirection {
    #[default]
    Down,
    Up,
}

/// What a successful window yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RayMode {
    /// Find i with e^i = 1 mod n (a multiple of ord_n(e)) and invert e mod i.
    #[default]
    OrderMultiple,
    /// Recover phi(n) from the pure-power structure of the window inverse,
    /// then derive d and the factorization.
    PhiRecovery,
}

/// Configuration of a ray attack run.
#[derive(Debug, Clone)]
pub struct RayConfig {
    /// First ray guess; defaults to floor(sqrt(n)).
    pub r_start: Option<Natural>,
    /// Distance between guesses; defaults to max(1, delta/2).
    pub step: Option<Natural>,
    pub direction: RayDirection,
    pub max_windows: u64,
    pub mode: RayMode,
    /// Seed for the probe messages validating a candidate d.
    pub probe_seed: u64,
}

impl Default for RayConfig {
    fn default() -> Self {
        Self {
            r_start: None,
            step: None,
            direction: RayDirection::Down,
            max_windows: 1_000_000,
            mode: RayMode::OrderMultiple,
            probe_seed: 0,
        }
    }
}

impl RayConfig {
    pub fn order_multiple() -> Self {
        Self::default()
    }

    pub fn phi_recovery() -> Self {
        Self { mode: RayMode::PhiRecovery, ..Self::default() }
    }
}

/// The window geometry of a ray attack against n = pq.
#[derive(Debug, Clone, PartialEq)]
pub struct RayBounds {
    pub e: Natural,
    pub p: Natural,
    pub q: Natural,
    /// delta = max{i : e^i <= n}.
    pub delta: u64,
    /// Delta = p + q + delta.
    pub big_delta: Natural,
    pub r_minus: f64,
    pub r_plus: f64,
}

impl RayBounds {
    /// Exact integer band [ceil(r-), p] and [q, floor(r+)] where ray
    /// guesses are guaranteed to work.
    pub fn integer_band(&self) -> (std::ops::RangeInclusive<Natural>, std::ops::RangeInclusive<Natural>) {
        let disc = self.discriminant();
        let t = isqrt(&disc);
        let lower_start = (&self.big_delta - &t + 1u32) >> 1;
        let upper_end = (&self.big_delta + &t) >> 1;
        (lower_start..=self.p.clone(), self.q.clone()..=upper_end)
    }

    fn discriminant(&self) -> Natural {
        &self.big_delta * &self.big_delta - Natural::from(4u32) * &self.p * &self.q
    }

    /// Exact form of r+ - q > delta/2.
    pub fn upper_gap_exceeds_half_step(&self) -> bool {
        let diff = &self.q - &self.p;
        self.discriminant() > &diff * &diff
    }

    /// Exact form of p - r- > delta/2.
    pub fn lower_gap_exceeds_half_step(&self) -> bool {
        let edge = &self.q - &self.p + Natural::from(2 * self.delta);
        self.discriminant() > &edge * &edge
    }

    /// The coarse-graining condition delta < (2/3)(3p - q).
    pub fn coarse_grain_condition(&self) -> bool {
        Natural::from(6u32) * &self.p > Natural::from(2u32) * &self.q + Natural::from(3 * self.delta)
    }
}

/// Window geometry for the pair p < q and exponent e > 1.
pub fn ray_bounds(e: &Natural, p: &Natural, q: &Natural) -> Result<RayBounds> {
    if *e <= Natural::one() {
        return Err(Error::InvalidInput("ray geometry requires e > 1".into()));
    }
    if p >= q || !is_prime(p) || !is_prime(q) {
        return Err(Error::InvalidInput("need primes p < q".into()));
    }
    let n = p * q;
    let delta = ilog(e, &n);
    let big_delta = p + q + Natural::from(delta);
    let disc = &big_delta * &big_delta - Natural::from(4u32) * &n;
    let sqrt_disc = disc.to_f64().map(f64::sqrt).unwrap_or(f64::NAN);
    let delta_f = big_delta.to_f64().unwrap_or(f64::NAN);
    let bounds = RayBounds {
        e: e.clone(),
        p: p.clone(),
        q: q.clone(),
        delta,
        big_delta,
        r_minus: (delta_f - sqrt_disc) / 2.0,
        r_plus: (delta_f + sqrt_disc) / 2.0,
    };
    if bounds.delta >= 1 {
        debug_assert!(bounds.upper_gap_exceeds_half_step());
        debug_assert!(!bounds.coarse_grain_condition() || bounds.lower_gap_exceeds_half_step());
    }
    Ok(bounds)
}

/// floor((r-1)(n-r)/r), the ray height at r, in exact arithmetic.
pub(crate) fn ray_height_floor(r: &Natural, n: &Natural) -> Natural {
    ((r - 1u32) * (n - r)) / r
}

/// ceil((r-1)(n-r)/r).
pub(crate) fn ray_height_ceil(r: &Natural, n: &Natural) -> Natural {
    ((r - 1u32) * (n - r) + r - 1u32) / r
}

/// Try to read phi(n) off a single ray guess r: with i = floor(f(r)) and
/// b the inverse of e^i mod n, the guess succeeds when b is literally a
/// power e^gamma with gamma <= delta; then phi(n) = i + gamma.
pub fn phi_from_ray(e: &Natural, n: &Natural, r: &Natural) -> Result<AttackOutcome> {
    let mut muls = 0u64;
    phi_from_ray_counted(e, n, r, &mut muls).map(|mut out| {
        out.work.mod_muls = muls;
        out
    })
}

fn phi_from_ray_counted(
    e: &Natural,
    n: &Natural,
    r: &Natural,
    muls: &mut u64,
) -> Result<AttackOutcome> {
    if *e <= Natural::one() {
        return Err(Error::InvalidInput("phi recovery requires e > 1".into()));
    }
    if *r < Natural::from(2u32) || r >= n {
        return Err(Error::InvalidInput(format!("ray guess must satisfy 2 <= r < n = {n}")));
    }
    if !e.gcd(n).is_one() {
        return Err(Error::InvalidInput(format!("gcd(e, n) = {} must be 1", e.gcd(n))));
    }
    let delta = ilog(e, n);
    let i = ray_height_floor(r, n);
    let c = mod_pow_counted(e, &i, n, muls);
    let b = mod_inv(&c, n, InverseStrategy::Euclid)?;
    match pure_power_exponent(e, &b) {
        Some(gamma) if gamma <= delta => {
            let phi = &i + Natural::from(gamma);
            Ok(AttackOutcome::success(
                phi.clone(),
                vec![
                    ("i", WitnessValue::Nat(i)),
                    ("c", WitnessValue::Nat(c)),
                    ("b", WitnessValue::Nat(b)),
                    ("gamma", WitnessValue::Nat(Natural::from(gamma))),
                    ("phi", WitnessValue::Nat(phi)),
                ],
                Work::default(),
            ))
        }
        _ => Ok(AttackOutcome::failure(
            vec![
                ("i", WitnessValue::Nat(i)),
                ("c", WitnessValue::Nat(c)),
                ("b", WitnessValue::Nat(b)),
            ],
            Work::default(),
        )),
    }
}

/// From phi(n) of a semiprime recover the factors and the private
/// exponent: p + q = n - phi + 1 and d = e^-1 mod lcm(p-1, q-1).
pub fn phi_to_private(n: &Natural, phi: &Natural, e: &Natural) -> Result<(Natural, Natural, Natural)> {
    if phi.is_zero() || phi >= n {
        return Err(Error::InconsistentPhi);
    }
    let s = n - phi + 1u32;
    let s_squared = &s * &s;
    let four_n = Natural::from(4u32) * n;
    if s_squared < four_n {
        return Err(Error::InconsistentPhi);
    }
    let disc = s_squared - four_n;
    let (t, exact) = integer_kth_root(&disc, 2)?;
    if !exact || t > s {
        return Err(Error::InconsistentPhi);
    }
    let p2 = &s - &t;
    if p2.is_odd() || p2.is_zero() {
        return Err(Error::InconsistentPhi);
    }
    let p: Natural = p2 >> 1;
    let q: Natural = (&s + &t) >> 1;
    if &p * &q != *n || p < Natural::from(2u32) {
        return Err(Error::InconsistentPhi);
    }
    let lambda = (&p - 1u32).lcm(&(&q - 1u32));
    let d = mod_inv(e, &lambda, InverseStrategy::Euclid)?;
    Ok((d, p, q))
}

/// The full ray attack: walk r from the start towards the band around p
/// (or q), test one window per guess, and validate any candidate d with
/// probe messages before reporting success.
pub fn ray_attack(e: &Natural, n: &Natural, cfg: &RayConfig) -> Result<AttackOutcome> {
    if *e <= Natural::one() || *n <= Natural::one() {
        return Err(Error::InvalidInput("ray attack requires e > 1 and n > 1".into()));
    }
    if !e.gcd(n).is_one() {
        return Err(Error::InvalidInput(format!("gcd(e, n) = {} must be 1", e.gcd(n))));
    }
    if is_prime_power(n) {
        return Err(Error::InvalidInput(format!("{n} is a prime power; no two-factor key to break")));
    }

    let delta = ilog(e, n);
    let step = match &cfg.step {
        Some(s) if s.is_zero() => return Err(Error::InvalidInput("step must be >= 1".into())),
        Some(s) => s.clone(),
        None => Natural::from((delta / 2).max(1)),
    };
    if cfg.max_windows == 0 {
        return Err(Error::InvalidInput("max_windows must be >= 1".into()));
    }
    let mut r = cfg.r_start.clone().unwrap_or_else(|| isqrt(n));
    let two = Natural::from(2u32);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.probe_seed);
    let probes: Vec<Natural> = (0..8).map(|_| rng.gen_biguint_range(&two, n)).collect();

    let mut work = Work::default();
    let mut skipped: Vec<Natural> = Vec::new();

    while work.windows < cfg.max_windows && r >= two && r < *n {
        work.windows += 1;
        match cfg.mode {
            RayMode::OrderMultiple => {
                let i0 = ray_height_ceil(&r, n);
                let mut x = mod_pow_counted(e, &i0, n, &mut work.mod_muls);
                let mut hit: Option<Natural> = None;
                for offset in 0..=delta {
                    if x.is_one() {
                        hit = Some(&i0 + Natural::from(offset));
                        break;
                    }
                    if offset < delta {
                        x = x * e % n;
                        work.mod_muls += 1;
                    }
                }
                if let Some(i) = hit {
                    if i >= two && e.gcd(&i).is_one() {
                        let d = mod_inv(e, &i, InverseStrategy::Euclid)?;
                        if probes_pass(e, &d, n, &probes, &mut work.mod_muls) {
                            return Ok(AttackOutcome::success(
                                d,
                                vec![
                                    ("r", WitnessValue::Nat(r)),
                                    ("i", WitnessValue::Nat(i)),
                                    ("skipped", WitnessValue::Nats(skipped)),
                                ],
                                work,
                            ));
                        }
                    }
                    skipped.push(r.clone());
                }
            }
            RayMode::PhiRecovery => {
                let attempt = phi_from_ray_counted(e, n, &r, &mut work.mod_muls)?;
                if attempt.success {
                    let phi = attempt.recovered.clone().expect("success carries phi");
                    // A spurious pure-power hit outside the band fails the
                    // factor reconstruction and the window is skipped.
                    match phi_to_private(n, &phi, e) {
                        Ok((_, p, q)) => {
                            let d = mod_inv(e, &phi, InverseStrategy::Euclid)?;
                            if probes_pass(e, &d, n, &probes, &mut work.mod_muls) {
                                let mut witness = vec![("r", WitnessValue::Nat(r))];
                                witness.extend(attempt.witness);
                                witness.push(("p", WitnessValue::Nat(p)));
                                witness.push(("q", WitnessValue::Nat(q)));
                                witness.push(("skipped", WitnessValue::Nats(skipped)));
                                return Ok(AttackOutcome::success(d, witness, work));
                            }
                            skipped.push(r.clone());
                        }
                        Err(Error::InconsistentPhi) | Err(Error::NotInvertible { .. }) => {
                            skipped.push(r.clone());
                        }
                        Err(other) => return Err(other),
                    }
                }
            }
        }

        match cfg.direction {
            RayDirection::Down => {
                if r < step {
                    break;
                }
                r = &r - &step;
            }
            RayDirection::Up => {
                r = &r + &step;
            }
        }
    }

    Ok(AttackOutcome::failure(
        vec![("skipped", WitnessValue::Nats(skipped))],
        work,
    ))
}

fn probes_pass(e: &Natural, d: &Natural, n: &Natural, probes: &[Natural], muls: &mut u64) -> bool {
    probes.iter().all(|m| {
        let c = mod_pow_counted(m, e, n, muls);
        mod_pow_counted(&c, d, n, muls) == *m
    })
}

fn is_prime_power(n: &Natural) -> bool {
    if is_prime(n) {
        return true;
    }
    for k in 2..=n.bits() {
        if let Ok((root, true)) = integer_kth_root(n, k) {
            if is_prime(&root) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn bounds_golden_small() {
        let b = ray_bounds(&n(7), &n(11), &n(13)).unwrap();
        assert_eq!(b.delta, 2);
        assert_eq!(b.big_delta, n(26));
        assert!((b.r_minus - 7.90).abs() < 0.01);
        assert!((b.r_plus - 18.10).abs() < 0.01);
        let (lower, upper) = b.integer_band();
        assert_eq!(lower, n(8)..=n(11));
        assert_eq!(upper, n(13)..=n(18));
    }

    #[test]
    fn bounds_golden_large() {
        let p = Natural::from(3_336_670_033u64);
        let q = Natural::from(9_876_543_211u64);
        let b = ray_bounds(&n(2), &p, &q).unwrap();
        assert_eq!(b.delta, 64);
        assert_eq!(b.big_delta, Natural::from(13_213_213_308u64));
        assert!((b.r_minus - 3_336_670_000.3).abs() < 0.5);
        assert!((b.r_plus - 9_876_543_307.6).abs() < 0.5);
    }

    #[test]
    fn bounds_trivial_when_e_exceeds_n() {
        let b = ray_bounds(&n(1000), &n(11), &n(13)).unwrap();
        assert_eq!(b.delta, 0);
        assert_eq!(b.big_delta, n(24));
        assert_eq!(b.r_minus, 11.0);
        assert_eq!(b.r_plus, 13.0);
    }

    #[test]
    fn phi_from_ray_golden() {
        let out = phi_from_ray(&n(7), &n(143), &n(8)).unwrap();
        assert!(out.success);
        assert_eq!(out.recovered, Some(n(120)));
        assert_eq!(out.witness_nat("i"), Some(&n(118)));
        assert_eq!(out.witness_nat("c"), Some(&n(108)));
        assert_eq!(out.witness_nat("b"), Some(&n(49)));
        assert_eq!(out.witness_nat("gamma"), Some(&n(2)));
    }

    #[test]
    fn phi_from_ray_exact_hit() {
        // f(13) = 120 exactly, so b = 1 and gamma = 0.
        let out = phi_from_ray(&n(7), &n(143), &n(13)).unwrap();
        assert!(out.success);
        assert_eq!(out.recovered, Some(n(120)));
        assert_eq!(out.witness_nat("i"), Some(&n(120)));
        assert_eq!(out.witness_nat("b"), Some(&n(1)));
        assert_eq!(out.witness_nat("gamma"), Some(&n(0)));
    }

    #[test]
    fn phi_from_ray_out_of_band_fails() {
        // r = 50 is far outside [r-, p] u [q, r+] for e = 2, n = 143, and
        // the window inverse is not a pure power of 2.
        let out = phi_from_ray(&n(2), &n(143), &n(50)).unwrap();
        assert!(!out.success);
    }

    #[test]
    fn phi_to_private_examples() {
        let (d, p, q) = phi_to_private(&n(143), &n(120), &n(7)).unwrap();
        assert_eq!((d, p, q), (n(43), n(11), n(13)));
        let (d, p, q) = phi_to_private(&n(221), &n(192), &n(11)).unwrap();
        assert_eq!((d, p, q), (n(35), n(13), n(17)));
        let (d, p, q) = phi_to_private(&n(493), &n(448), &n(3)).unwrap();
        assert_eq!((d, p, q), (n(75), n(17), n(29)));
    }

    #[test]
    fn phi_to_private_rejects_bad_phi() {
        assert!(matches!(phi_to_private(&n(143), &n(121), &n(7)), Err(Error::InconsistentPhi)));
        assert!(matches!(phi_to_private(&n(143), &n(60), &n(7)), Err(Error::InconsistentPhi)));
    }

    #[test]
    fn ray_attack_phi_mode_golden() {
        let cfg = RayConfig { r_start: Some(n(13)), ..RayConfig::phi_recovery() };
        let out = ray_attack(&n(7), &n(143), &cfg).unwrap();
        assert!(out.success);
        // Scanning 0 < d < 120 finds exactly 103 with 7d = 1 mod 120.
        let brute: Vec<u64> = (1..120).filter(|d| 7 * d % 120 == 1).collect();
        assert_eq!(brute, vec![103]);
        assert_eq!(out.recovered, Some(n(103)));
        assert_eq!(out.witness_nat("p"), Some(&n(11)));
        assert_eq!(out.witness_nat("q"), Some(&n(13)));
        assert_eq!(out.witness_nat("phi"), Some(&n(120)));
    }

    #[test]
    fn ray_attack_order_mode_golden() {
        let cfg = RayConfig { r_start: Some(n(13)), ..RayConfig::order_multiple() };
        let out = ray_attack(&n(11), &n(221), &cfg).unwrap();
        assert!(out.success);
        let i = out.witness_nat("i").unwrap().clone();
        assert!((&i % n(48)).is_zero(), "i = {i} must be a multiple of ord_221(11) = 48");
        let d = out.recovered.unwrap();
        assert_eq!(&d % n(48), n(35));
    }

    #[test]
    fn ray_attack_rejects_bad_inputs() {
        let cfg = RayConfig::default();
        assert!(ray_attack(&n(7), &n(13), &cfg).is_err()); // prime
        assert!(ray_attack(&n(7), &n(121), &cfg).is_err()); // prime power
        assert!(ray_attack(&n(11), &n(121), &cfg).is_err());
        assert!(ray_attack(&n(13), &n(143), &cfg).is_err()); // shared factor
        assert!(ray_attack(&n(1), &n(143), &cfg).is_err());
    }

    #[test]
    fn ray_attack_window_budget() {
        let cfg = RayConfig {
            r_start: Some(n(100)),
            max_windows: 3,
            ..RayConfig::phi_recovery()
        };
        let out = ray_attack(&n(7), &n(143), &cfg).unwrap();
        assert!(!out.success);
        assert_eq!(out.work.windows, 3);
    }
}
