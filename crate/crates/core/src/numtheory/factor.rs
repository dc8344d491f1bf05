
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numtheory::primality::is_prime;
use crate::numtheory::Natural;

/// Trial division handles every divisor up to this bound before the
/// rho stage starts.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Iteration budget shared by all rho rounds of one factorization.
pub const DEFAULT_RHO_BUDGET: u64 = 10_000_000;

/// Prime factorization as an ascending list of (prime, exponent) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(Natural, u32)>,
}

impl Factorization {
    /// Build from raw parts, validating primality, order and distinctness.
    pub fn new(factors: Vec<(Natural, u32)>) -> Result<Self> {
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::InvalidInput("factors must be ascending and distinct".into()));
            }
        }
        for (p, exp) in &factors {
            if *exp == 0 {
                return Err(Error::InvalidInput("factor exponents must be at least 1".into()));
            }
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = &Natural> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Product of all prime powers.
    pub fn value(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Euler totient via the explicit product formula.
    pub fn phi(&self) -> Natural {
        self.factors.iter().fold(Natural::one(), |acc, (p, e)| {
            acc * p.pow(e - 1) * (p - 1u32)
        })
    }

    /// Carmichael function: lcm over the prime-power components, with the
    /// power-of-two special case 2^(a-2) for a >= 3.
    pub fn lambda(&self) -> Natural {
        let two = Natural::from(2u32);
        self.factors.iter().fold(Natural::one(), |acc, (p, e)| {
            let component = if *p == two && *e >= 3 {
                two.pow(e - 2)
            } else {
                p.pow(e - 1) * (p - 1u32)
            };
            acc.lcm(&component)
        })
    }
}

/// Factor n >= 2 with the default work budget.
pub fn factorize(n: &Natural) -> Result<Factorization> {
    factorize_with_budget(n, DEFAULT_RHO_BUDGET)
}

/// Factor n >= 2: trial division up to 10^6 followed by Pollard rho with
/// Brent cycle detection. The budget caps the total rho iterations; when
/// it runs out the call fails rather than returning a wrong answer.
pub fn factorize_with_budget(n: &Natural, rho_budget: u64) -> Result<Factorization> {
    if *n < Natural::from(2u32) {
        return Err(Error::InvalidInput("factorization requires n >= 2".into()));
    }
    let mut factors: Vec<(Natural, u32)> = Vec::new();
    let mut rest = n.clone();

    let push = |p: Natural, e: u32, factors: &mut Vec<(Natural, u32)>| {
        match factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, exp)) => *exp += e,
            None => factors.push((p, e)),
        }
    };

    // Trial stage. The d*d <= rest check bounds the scan for small inputs.
    let mut divisor = Natural::from(2u32);
    let bound = Natural::from(TRIAL_DIVISION_BOUND);
    while divisor <= bound && &divisor * &divisor <= rest {
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&divisor);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            push(divisor.clone(), e, &mut factors);
        }
        divisor = if divisor.is_even() { divisor + 1u32 } else { divisor + 2u32 };
    }

    // Rho stage on whatever survived trial division.
    let mut budget = rho_budget;
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime(&m) {
            push(m, 1, &mut factors);
            continue;
        }
        let d = rho_brent(&m, &mut budget)?;
        stack.push(&m / &d);
        stack.push(d);
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    debug_assert_eq!(
        factors.iter().fold(Natural::one(), |acc, (p, e)| acc * p.pow(*e)),
        *n
    );
    Ok(Factorization { factors })
}

/// Pollard rho with Brent's cycle detection; returns a nontrivial factor
/// of an odd composite m. Parameters are varied deterministically.
fn rho_brent(m: &Natural, budget: &mut u64) -> Result<Natural> {
    for offset in 1u64.. {
        let c = Natural::from(offset);
        let mut y = Natural::from(2u64 + offset);
        let mut g = Natural::one();
        let mut r = 1u64;
        let mut q = Natural::one();
        let mut ys = y.clone();
        let mut x = y.clone();
        let step = |v: &Natural| (v * v + &c) % m;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let batch = 128.min(r - k);
                for _ in 0..batch {
                    if *budget == 0 {
                        return Err(Error::BudgetExhausted(format!("factoring {m}")));
                    }
                    *budget -= 1;
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % m;
                }
                g = q.gcd(m);
                k += batch;
            }
            r *= 2;
        }
        if g == *m {
            // Backtrack one batch with per-step gcds.
            g = Natural::one();
            while g.is_one() {
                if *budget == 0 {
                    return Err(Error::BudgetExhausted(format!("factoring {m}")));
                }
                *budget -= 1;
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(m);
            }
        }
        if g != *m && !g.is_one() {
            return Ok(g);
        }
        // Cycle collapsed onto m itself; retry with the next parameter.
    }
    unreachable!("parameter loop is unbounded")
}

/// Convenience: phi(n) with the convention phi(1) = 1.
pub fn euler_phi(n: &Natural) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::InvalidInput("phi requires n >= 1".into()));
    }
    if n.is_one() {
        return Ok(Natural::one());
    }
    Ok(factorize(n)?.phi())
}

/// Convenience: lambda(n) with the convention lambda(1) = 1.
pub fn carmichael_lambda(n: &Natural) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::InvalidInput("lambda requires n >= 1".into()));
    }
    if n.is_one() {
        return Ok(Natural::one());
    }
    Ok(factorize(n)?.lambda())
}
