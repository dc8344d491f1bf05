use std::io::{self, Write};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numtheory::Natural;
use crate::rsa::lattice::{enumerate_keypairs, region_u_contains};

/// Ray primes sketched by default.
pub const DEFAULT_RAY_PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

/// One squarefree semiprime with its totient values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiprimeRow {
    pub n: u64,
    pub phi: u64,
    pub lambda: u64,
}

fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let size = limit as usize + 1;
    let mut is_prime = vec![true; size];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut p = 2usize;
    while p * p < size {
        if is_prime[p] {
            for multiple in (p * p..size).step_by(p) {
                is_prime[multiple] = false;
            }
        }
        p += 1;
    }
    (2..size).filter(|&i| is_prime[i]).map(|i| i as u64).collect()
}

/// All squarefree semiprimes n = p*q <= limit with phi and lambda,
/// ascending in n.
pub fn semiprime_table(limit: u64) -> Result<Vec<SemiprimeRow>> {
    if limit < 6 {
        return Err(Error::InvalidInput("the smallest semiprime is 6".into()));
    }
    let primes = sieve(limit / 2);
    let mut rows = Vec::new();
    for (idx, &p) in primes.iter().enumerate() {
        if p * p > limit {
            break;
        }
        for &q in &primes[idx + 1..] {
            if p * q > limit {
                break;
            }
            rows.push(SemiprimeRow {
                n: p * q,
                phi: (p - 1) * (q - 1),
                lambda: (p - 1).lcm(&(q - 1)),
            });
        }
    }
    rows.sort_by_key(|row| row.n);
    Ok(rows)
}

/// CSV: "n,phi,lambda".
pub fn write_semiprime_table_csv<W: Write>(w: &mut W, rows: &[SemiprimeRow]) -> io::Result<()> {
    writeln!(w, "n,phi,lambda")?;
    for row in rows {
        writeln!(w, "{},{},{}", row.n, row.phi, row.lambda)?;
    }
    Ok(())
}

/// Scatter points (n, phi(n)) and sampled rays for plotting the totient
/// of semiprimes against the lines through (p, 0) with slope (p-1)/p.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPlotData {
    /// (n, phi(n)) for each squarefree semiprime n <= limit.
    pub scatter: Vec<(u64, u64)>,
    /// (p, x, f_p(x)) sampled at the integer multiples x of p.
    pub rays: Vec<(u64, u64, f64)>,
}

/// Build the scatter/ray data set. Every scatter point lies on the ray of
/// its smaller prime factor and above the rays of smaller primes.
pub fn ray_plot_export(limit: u64, ray_primes: &[u64]) -> Result<RayPlotData> {
    let table = semiprime_table(limit)?;
    let scatter: Vec<(u64, u64)> = table.iter().map(|row| (row.n, row.phi)).collect();
    let mut rays = Vec::new();
    for &p in ray_primes {
        let mut x = p;
        while x <= limit {
            let y = (p - 1) * (x / p - 1);
            rays.push((p, x, y as f64));
            x += p;
        }
    }
    Ok(RayPlotData { scatter, rays })
}

/// CSV: "n,phi".
pub fn write_scatter_csv<W: Write>(w: &mut W, data: &RayPlotData) -> io::Result<()> {
    writeln!(w, "n,phi")?;
    for (n, phi) in &data.scatter {
        writeln!(w, "{n},{phi}")?;
    }
    Ok(())
}

/// CSV: "p,x,y" with y printed to six decimal places.
pub fn write_rays_csv<W: Write>(w: &mut W, data: &RayPlotData) -> io::Result<()> {
    writeln!(w, "p,x,y")?;
    for (p, x, y) in &data.rays {
        writeln!(w, "{p},{x},{y:.6}")?;
    }
    Ok(())
}

/// The full (e, d) lattice for the pair (p, q) with region-U membership.
pub fn lattice_export(p: &Natural, q: &Natural) -> Result<Vec<(Natural, Natural, bool)>> {
    let lambda = (p - 1u32).lcm(&(q - 1u32));
    let pairs = enumerate_keypairs(p, q)?;
    Ok(pairs
        .into_iter()
        .map(|(e, d)| {
            let in_u = region_u_contains(&e, &d, &lambda);
            (e, d, in_u)
        })
        .collect())
}

/// CSV: "e,d,in_region_u" with the flag printed as 0/1.
pub fn write_lattice_csv<W: Write>(w: &mut W, rows: &[(Natural, Natural, bool)]) -> io::Result<()> {
    writeln!(w, "e,d,in_region_u")?;
    for (e, d, in_u) in rows {
        writeln!(w, "{e},{d},{}", u8::from(*in_u))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_thirteen_below_fifty() {
        let rows = semiprime_table(50).unwrap();
        assert_eq!(rows.len(), 13);
        let row = |n: u64| rows.iter().find(|r| r.n == n).copied().unwrap();
        assert_eq!(row(6), SemiprimeRow { n: 6, phi: 2, lambda: 2 });
        assert_eq!(row(15), SemiprimeRow { n: 15, phi: 8, lambda: 4 });
        assert_eq!(row(21), SemiprimeRow { n: 21, phi: 12, lambda: 6 });
    }

    #[test]
    fn table_rows_golden() {
        let rows = semiprime_table(100).unwrap();
        assert_eq!(rows.len(), 30);
        let row = |n: u64| rows.iter().find(|r| r.n == n).copied().unwrap();
        assert_eq!(row(55), SemiprimeRow { n: 55, phi: 40, lambda: 20 });
        assert_eq!(row(91), SemiprimeRow { n: 91, phi: 72, lambda: 12 });
    }

    #[test]
    fn csv_shape() {
        let rows = semiprime_table(15).unwrap();
        let mut buf = Vec::new();
        write_semiprime_table_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,phi,lambda\n6,2,2\n10,4,4\n14,6,6\n15,8,4\n");
    }

    #[test]
    fn scatter_sits_on_own_ray_and_above_smaller_ones() {
        let data = ray_plot_export(200, &DEFAULT_RAY_PRIMES).unwrap();
        // (143, 120) lies on the ray of 11 and strictly above the ray of 7.
        assert!(data.scatter.contains(&(143, 120)));
        let f = |p: u64, x: u64| (p - 1) as f64 * (x as f64 / p as f64 - 1.0);
        assert!((f(11, 143) - 120.0).abs() < 1e-9);
        assert!(f(7, 143) < 120.0);
    }

    #[test]
    fn rays_csv_six_decimals() {
        let data = ray_plot_export(10, &[2]).unwrap();
        let mut buf = Vec::new();
        write_rays_csv(&mut buf, &data).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p,x,y\n2,2,0.000000\n2,4,1.000000\n"));
    }

    #[test]
    fn lattice_golden_shape() {
        let p = Natural::from(11u32);
        let q = Natural::from(83u32);
        let rows = lattice_export(&p, &q).unwrap();
        assert_eq!(rows.len(), 160);
        let one = Natural::from(1u32);
        assert!(rows.iter().any(|(e, d, _)| *e == one && *d == one));
    }
}
