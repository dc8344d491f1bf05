use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::numtheory::factor::{carmichael_lambda, euler_phi};
use crate::numtheory::Natural;

/// Enumeration guard on the modulus.
pub const SUBGROUP_MODULUS_GUARD: u64 = 10_000;

/// Cap on the number of subgroups collected before giving up.
const SUBGROUP_COUNT_GUARD: usize = 100_000;

/// Cap on modular multiplications spent saturating the lattice.
const SUBGROUP_OPS_GUARD: u64 = 200_000_000;

/// One subgroup of Z*_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    /// Sorted elements, always containing 1.
    pub elements: Vec<u64>,
    pub order: u64,
    pub cyclic: bool,
}

/// The complete subgroup lattice of Z*_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSet {
    pub modulus: u64,
    pub subgroups: Vec<Subgroup>,
}

impl SubgroupSet {
    pub fn contains_elements(&self, elements: &[u64]) -> bool {
        self.subgroups.iter().any(|s| s.elements == elements)
    }

    pub fn orders(&self) -> Vec<u64> {
        let mut orders: Vec<u64> = self.subgroups.iter().map(|s| s.order).collect();
        orders.sort_unstable();
        orders.dedup();
        orders
    }
}

fn mul(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

/// The subgroup generated by H and one extra element g, as the coset
/// union H * <g>. Since g^k falls back into H after k = ord(gH) steps,
/// the cost is proportional to the output size.
fn extend(n: u64, h: &BTreeSet<u64>, g: u64, ops: &mut u64) -> Result<BTreeSet<u64>> {
    let mut coset_reps = Vec::new();
    let mut acc = g;
    while !h.contains(&acc) {
        coset_reps.push(acc);
        acc = mul(acc, g, n);
        *ops += 1;
    }
    let mut out = h.clone();
    for rep in coset_reps {
        for &x in h {
            out.insert(mul(x, rep, n));
        }
        *ops += h.len() as u64;
        if *ops > SUBGROUP_OPS_GUARD {
            return Err(Error::BudgetExhausted(format!(
                "saturating the subgroup lattice of Z*_{n}"
            )));
        }
    }
    Ok(out)
}

fn order_in_group(n: u64, g: u64) -> u64 {
    let mut acc = g % n;
    let mut ord = 1u64;
    while acc != 1 % n {
        acc = mul(acc, g, n);
        ord += 1;
    }
    ord
}

/// Enumerate every subgroup of Z*_n by saturating the subgroup lattice:
/// extend each known subgroup by one extra generator until no new
/// closures appear. Orders are checked against phi(n), and against
/// lambda(n) for the cyclic ones.
pub fn subgroup_enumeration(n: u64) -> Result<SubgroupSet> {
    if n < 2 {
        return Err(Error::InvalidInput("subgroup enumeration requires n >= 2".into()));
    }
    if n > SUBGROUP_MODULUS_GUARD {
        return Err(Error::BudgetExhausted(format!(
            "enumerating subgroups beyond the n <= {SUBGROUP_MODULUS_GUARD} guard"
        )));
    }
    let units: Vec<u64> = (1..n.max(2))
        .filter(|&k| num_integer::gcd(k, n) == 1)
        .collect();

    let trivial = BTreeSet::from([1 % n]);
    let mut known: BTreeSet<Vec<u64>> = BTreeSet::new();
    known.insert(trivial.iter().copied().collect());
    let mut frontier: Vec<BTreeSet<u64>> = vec![trivial];
    let mut ops = 0u64;

    while let Some(subgroup) = frontier.pop() {
        for &g in &units {
            if subgroup.contains(&g) {
                continue;
            }
            let extended = extend(n, &subgroup, g, &mut ops)?;
            let key: Vec<u64> = extended.iter().copied().collect();
            if known.insert(key) {
                if known.len() > SUBGROUP_COUNT_GUARD {
                    return Err(Error::BudgetExhausted(format!(
                        "subgroup lattice of Z*_{n} exceeds {SUBGROUP_COUNT_GUARD} entries"
                    )));
                }
                frontier.push(extended);
            }
        }
    }

    let phi = u64::try_from(&euler_phi(&Natural::from(n))?).expect("phi fits u64 under the guard");
    let lambda =
        u64::try_from(&carmichael_lambda(&Natural::from(n))?).expect("lambda fits u64");

    let mut subgroups: Vec<Subgroup> = known
        .into_iter()
        .map(|elements| {
            let order = elements.len() as u64;
            let cyclic = elements.iter().any(|&g| order_in_group(n, g) == order);
            Subgroup { elements, order, cyclic }
        })
        .collect();
    subgroups.sort_by(|a, b| (a.order, &a.elements).cmp(&(b.order, &b.elements)));

    for s in &subgroups {
        assert_eq!(phi % s.order, 0, "subgroup order {} must divide phi({n}) = {phi}", s.order);
        if s.cyclic {
            assert_eq!(
                lambda % s.order,
                0,
                "cyclic subgroup order {} must divide lambda({n}) = {lambda}",
                s.order
            );
        }
    }

    Ok(SubgroupSet { modulus: n, subgroups })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mod_15() {
        let set = subgroup_enumeration(15).unwrap();
        // The six listed small subgroups.
        for elements in [
            vec![1u64],
            vec![1, 4],
            vec![1, 11],
            vec![1, 14],
            vec![1, 2, 4, 8],
            vec![1, 4, 7, 13],
        ] {
            assert!(set.contains_elements(&elements), "missing {elements:?}");
        }
        // The complete lattice has two more: {1,4,11,14} and Z*_15 itself.
        assert!(set.contains_elements(&[1, 4, 11, 14]));
        assert!(set.contains_elements(&[1, 2, 4, 7, 8, 11, 13, 14]));
        assert_eq!(set.subgroups.len(), 8);
    }

    #[test]
    fn golden_mod_7() {
        let set = subgroup_enumeration(7).unwrap();
        assert_eq!(set.orders(), vec![1, 2, 3, 6]);
        assert!(set.contains_elements(&[1, 2, 4]));
    }

    #[test]
    fn closure_recheck() {
        for n in [2u64, 7, 15, 24, 36] {
            let set = subgroup_enumeration(n).unwrap();
            for s in &set.subgroups {
                assert!(s.elements.contains(&(1 % n)));
                for &a in &s.elements {
                    for &b in &s.elements {
                        let prod = mul(a, b, n);
                        assert!(s.elements.binary_search(&prod).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn guard_enforced() {
        assert!(subgroup_enumeration(SUBGROUP_MODULUS_GUARD + 1).is_err());
        assert!(subgroup_enumeration(1).is_err());
    }
}
