use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numtheory::Natural;

/// Enumeration guard for the full map decomposition.
pub const CYCLE_GUARD: u64 = 1_000_000;

/// How the map x -> x^e mod n acts on Z_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleStructure {
    /// The map is a bijection; Z_n splits into disjoint cycles.
    Permutation {
        /// Each cycle rotated so its smallest element comes first, sorted
        /// by (length, first element).
        cycles: Vec<Vec<u64>>,
        /// period -> number of cycles with that period.
        summary: BTreeMap<u64, u64>,
    },
    /// Not a bijection: orbits are rho-shaped (a tail running into a
    /// cycle), so only the terminal cycles are listed.
    NonPermutation {
        cycles: Vec<Vec<u64>>,
        summary: BTreeMap<u64, u64>,
        /// Number of residues that sit on tails, outside every cycle.
        tail_nodes: u64,
    },
}

/// Decomposition of Z_n under repeated e-th powering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub modulus: u64,
    pub exponent: Natural,
    pub structure: CycleStructure,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<u64>] {
        match &self.structure {
            CycleStructure::Permutation { cycles, .. } => cycles,
            CycleStructure::NonPermutation { cycles, .. } => cycles,
        }
    }

    pub fn summary(&self) -> &BTreeMap<u64, u64> {
        match &self.structure {
            CycleStructure::Permutation { summary, .. } => summary,
            CycleStructure::NonPermutation { summary, .. } => summary,
        }
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self.structure, CycleStructure::Permutation { .. })
    }

    /// Periods of every residue: the cycle length for cycle members.
    pub fn period_of_elements(&self) -> BTreeMap<u64, u64> {
        let mut periods = BTreeMap::new();
        for cycle in self.cycles() {
            for &x in cycle {
                periods.insert(x, cycle.len() as u64);
            }
        }
        periods
    }
}

fn pow_mod_u64(mut base: u64, exp: &Natural, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    base %= modulus;
    for i in 0..exp.bits() {
        if exp.bit(i) {
            result = ((result as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
    }
    result
}

/// Decompose Z_n under x -> x^e mod n into cycles. Non-bijective maps are
/// reported rather than rejected, with tails counted separately.
pub fn cycle_decomposition(n: u64, e: &Natural) -> Result<CycleDecomposition> {
    if n == 0 {
        return Err(Error::InvalidInput("cycle decomposition requires n >= 1".into()));
    }
    if n > CYCLE_GUARD {
        return Err(Error::BudgetExhausted(format!(
            "decomposing Z_{n} beyond the {CYCLE_GUARD} element guard"
        )));
    }
    let size = n as usize;
    let image: Vec<u64> = (0..n).map(|x| pow_mod_u64(x, e, n)).collect();

    let mut hit = vec![false; size];
    let mut is_permutation = true;
    for &y in &image {
        if hit[y as usize] {
            is_permutation = false;
            break;
        }
        hit[y as usize] = true;
    }

    // Walk the functional graph once, recording each terminal cycle.
    let mut state = vec![0u8; size]; // 0 unseen, 1 on current path, 2 done
    let mut on_cycle = vec![false; size];
    let mut cycles: Vec<Vec<u64>> = Vec::new();
    for start in 0..size {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            x = image[x] as usize;
        }
        if state[x] == 1 {
            // Found a new cycle beginning at x within the current path.
            let cycle_start = path.iter().position(|&v| v == x).expect("x is on the path");
            let cycle: Vec<u64> = path[cycle_start..].iter().map(|&v| v as u64).collect();
            for &v in &cycle {
                on_cycle[v as usize] = true;
            }
            cycles.push(cycle);
        }
        for v in path {
            state[v] = 2;
        }
    }

    let canonical = |mut cycle: Vec<u64>| -> Vec<u64> {
        let min_pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .expect("cycles are non-empty");
        cycle.rotate_left(min_pos);
        cycle
    };
    let mut cycles: Vec<Vec<u64>> = cycles.into_iter().map(canonical).collect();
    cycles.sort_by(|a, b| (a.len(), a[0]).cmp(&(b.len(), b[0])));

    let mut summary: BTreeMap<u64, u64> = BTreeMap::new();
    for cycle in &cycles {
        *summary.entry(cycle.len() as u64).or_insert(0) += 1;
    }

    let structure = if is_permutation {
        CycleStructure::Permutation { cycles, summary }
    } else {
        let tail_nodes = (0..size).filter(|&v| !on_cycle[v]).count() as u64;
        CycleStructure::NonPermutation { cycles, summary, tail_nodes }
    };
    Ok(CycleDecomposition { modulus: n, exponent: e.clone(), structure })
}
