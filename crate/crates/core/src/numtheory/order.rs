use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numtheory::factor::{factorize, Factorization};
use crate::numtheory::Natural;

/// The omega function: ord_n(m) when gcd(m, n) = 1, otherwise 0.
///
/// The order is found by reducing lambda(n) through its prime factors.
/// When lambda(n) itself resists factoring within budget, the search
/// falls back to sequential powering bounded by lambda(n).
pub fn omega(m: &Natural, n: &Natural) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::InvalidInput("omega requires n >= 1".into()));
    }
    if !m.gcd(n).is_one() {
        return Ok(Natural::zero());
    }
    if n.is_one() {
        return Ok(Natural::one());
    }
    let lambda = factorize(n)?.lambda();
    if lambda.is_one() {
        return Ok(Natural::one());
    }
    match factorize(&lambda) {
        Ok(lambda_factors) => Ok(order_from_lambda(m, n, &lambda, &lambda_factors)),
        Err(Error::BudgetExhausted(_)) => Ok(order_sequential(m, n, &lambda)),
        Err(e) => Err(e),
    }
}

/// Order of m mod n given lambda(n) and its factorization: start from
/// lambda and divide out prime factors while the power stays 1.
pub(crate) fn order_from_lambda(
    m: &Natural,
    n: &Natural,
    lambda: &Natural,
    lambda_factors: &Factorization,
) -> Natural {
    let mut ord = lambda.clone();
    for (p, _) in lambda_factors.factors() {
        while (&ord % p).is_zero() {
            let candidate = &ord / p;
            if m.modpow(&candidate, n).is_one() {
                ord = candidate;
            } else {
                break;
            }
        }
    }
    ord
}

fn order_sequential(m: &Natural, n: &Natural, lambda: &Natural) -> Natural {
    let mut acc = m % n;
    let mut k = Natural::one();
    while !acc.is_one() && k < *lambda {
        acc = acc * m % n;
        k += 1u32;
    }
    k
}

/// Iterated omega values [w(n), w(w(n)), ...] up to `depth` terms,
/// truncating after the first zero term.
pub fn omega_tower(m: &Natural, n: &Natural, depth: u64) -> Result<Vec<Natural>> {
    if depth == 0 {
        return Err(Error::InvalidInput("tower depth must be at least 1".into()));
    }
    let mut tower = Vec::new();
    let mut current = n.clone();
    for _ in 0..depth {
        let next = omega(m, &current)?;
        let stop = next.is_zero();
        tower.push(next.clone());
        if stop {
            break;
        }
        current = next;
    }
    Ok(tower)
}

/// Smallest k >= 1 with c_k = c_0 for the sequence c_i = c_{i-1}^e mod n
/// starting from c_0 = m. Requires gcd(e, lambda(n)) = 1 so the map is a
/// permutation and the orbit is a pure cycle.
pub fn iteration_exponent(n: &Natural, e: &Natural, m: &Natural, max_steps: u64) -> Result<Natural> {
    if *n < Natural::from(2u32) {
        return Err(Error::InvalidInput("iteration exponent requires n >= 2".into()));
    }
    let lambda = factorize(n)?.lambda();
    let g = e.gcd(&lambda);
    if !g.is_one() {
        return Err(Error::InvalidInput(format!(
            "exponent {e} shares factor {g} with lambda({n}) = {lambda}"
        )));
    }
    let start = m % n;
    let mut current = start.modpow(e, n);
    let mut k = 1u64;
    while current != start {
        if k >= max_steps {
            return Err(Error::BudgetExhausted(format!(
                "iterating m^(e^k) mod {n} past {max_steps} steps"
            )));
        }
        current = current.modpow(e, n);
        k += 1;
    }
    Ok(Natural::from(k))
}
