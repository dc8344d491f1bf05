use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numtheory::euclid::{mod_inv, InverseStrategy};
use crate::numtheory::factor::factorize;
use crate::numtheory::primality::is_prime;
use crate::numtheory::Natural;

/// Guard for in-memory enumeration of the (e, d) lattice.
pub const ENUMERATION_GUARD: u64 = 1_000_000;

fn lambda_of_pair(p: &Natural, q: &Natural) -> Result<Natural> {
    if p == q || !is_prime(p) || !is_prime(q) {
        return Err(Error::InvalidInput("p and q must be distinct primes".into()));
    }
    Ok((p - 1u32).lcm(&(q - 1u32)))
}

/// Number of valid key pairs for the modulus pq: phi(lambda(pq)).
pub fn count_keypairs(p: &Natural, q: &Natural) -> Result<Natural> {
    let lambda = lambda_of_pair(p, q)?;
    Ok(factorize(&lambda)?.phi())
}

/// All pairs (e, d) with 0 < e, d < lambda(pq) and e*d = 1 mod lambda(pq),
/// listed in ascending e order. Guarded by lambda(pq) <= 10^6.
pub fn enumerate_keypairs(p: &Natural, q: &Natural) -> Result<Vec<(Natural, Natural)>> {
    let lambda = lambda_of_pair(p, q)?;
    if lambda > Natural::from(ENUMERATION_GUARD) {
        return Err(Error::BudgetExhausted(format!(
            "enumerating keypairs for lambda = {lambda} beyond the {ENUMERATION_GUARD} guard"
        )));
    }
    let lambda_u = u64::try_from(&lambda).expect("guard keeps lambda in u64 range");
    let mut pairs = Vec::new();
    for e in 1..lambda_u {
        let e_nat = Natural::from(e);
        if e_nat.gcd(&lambda).is_one() {
            let d = mod_inv(&e_nat, &lambda, InverseStrategy::Euclid)?;
            pairs.push((e_nat, d));
        }
    }
    Ok(pairs)
}

fn in_region_u(e: &Natural, d: &Natural, lambda: &Natural) -> bool {
    let reflected = lambda - e;
    let bound = e.min(&reflected);
    !d.is_zero() && d <= bound
}

/// Map a valid pair into the fundamental region
/// U = {(e, d) : 0 < d <= min(e, lambda - e)} using the two lattice
/// reflections (swap and point reflection).
pub fn fold_to_region_u(e: &Natural, d: &Natural, lambda_n: &Natural) -> Result<(Natural, Natural)> {
    validate_pair(e, d, lambda_n)?;
    let candidates = [
        (e.clone(), d.clone()),
        (d.clone(), e.clone()),
        (lambda_n - e, lambda_n - d),
        (lambda_n - d, lambda_n - e),
    ];
    candidates
        .into_iter()
        .find(|(fe, fd)| in_region_u(fe, fd, lambda_n))
        .ok_or_else(|| Error::InvalidInput("pair has no image inside region U".into()))
}

/// Regenerate the full lattice from its region-U representatives by applying
/// both reflections; output is sorted and deduplicated.
pub fn unfold_region_u(
    points: &[(Natural, Natural)],
    lambda_n: &Natural,
) -> Result<Vec<(Natural, Natural)>> {
    let mut all = Vec::with_capacity(points.len() * 4);
    for (e, d) in points {
        validate_pair(e, d, lambda_n)?;
        if !in_region_u(e, d, lambda_n) {
            return Err(Error::InvalidInput(format!("({e}, {d}) is not in region U")));
        }
        all.push((e.clone(), d.clone()));
        all.push((d.clone(), e.clone()));
        all.push((lambda_n - e, lambda_n - d));
        all.push((lambda_n - d, lambda_n - e));
    }
    all.sort();
    all.dedup();
    Ok(all)
}

fn validate_pair(e: &Natural, d: &Natural, lambda_n: &Natural) -> Result<()> {
    if e.is_zero() || d.is_zero() || e >= lambda_n || d >= lambda_n {
        return Err(Error::InvalidInput(format!(
            "exponents must lie strictly between 0 and lambda = {lambda_n}"
        )));
    }
    if !(e * d % lambda_n).is_one() {
        return Err(Error::InvalidInput(format!("{e} * {d} is not 1 mod {lambda_n}")));
    }
    Ok(())
}

/// Region-U membership, exported for the lattice CSV.
pub fn region_u_contains(e: &Natural, d: &Natural, lambda_n: &Natural) -> bool {
    in_region_u(e, d, lambda_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_keypairs(&n(11), &n(83)).unwrap(), n(160));
        assert_eq!(count_keypairs(&n(3), &n(5)).unwrap(), n(2));
    }

    #[test]
    fn enumeration_contains_trivial_pairs() {
        let pairs = enumerate_keypairs(&n(11), &n(83)).unwrap();
        assert_eq!(pairs.len(), 160);
        assert!(pairs.contains(&(n(1), n(1))));
        assert!(pairs.contains(&(n(409), n(409)))); // lambda - 1 = 409
        for (e, d) in &pairs {
            assert!((e * d % n(410)).is_one());
        }
    }

    #[test]
    fn fold_examples() {
        // (35, 11) is valid mod 48 and reflects (13, 37).
        assert!((n(35) * n(11) % n(48)).is_one());
        let folded = fold_to_region_u(&n(35), &n(11), &n(48)).unwrap();
        assert!(region_u_contains(&folded.0, &folded.1, &n(48)));
        // Folding is idempotent on U.
        let again = fold_to_region_u(&folded.0, &folded.1, &n(48)).unwrap();
        assert_eq!(folded, again);
    }

    #[test]
    fn unfold_fold_roundtrip() {
        let lambda = n(410);
        let pairs = enumerate_keypairs(&n(11), &n(83)).unwrap();
        let mut region: Vec<(Natural, Natural)> = pairs
            .iter()
            .map(|(e, d)| fold_to_region_u(e, d, &lambda).unwrap())
            .collect();
        region.sort();
        region.dedup();
        let mut unfolded = unfold_region_u(&region, &lambda).unwrap();
        unfolded.sort();
        let mut expected = pairs;
        expected.sort();
        assert_eq!(unfolded, expected);
    }

    #[test]
    fn guard_enforced() {
        // lambda(1000003 * 1000033) far exceeds the guard.
        let p = n(1_000_003);
        let q = n(1_000_033);
        assert!(matches!(enumerate_keypairs(&p, &q), Err(Error::BudgetExhausted(_))));
    }
}
