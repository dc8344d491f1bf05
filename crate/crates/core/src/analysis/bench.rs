use std::io::{self, Write};
use std::time::Instant;

use num_traits::ToPrimitive;

use crate::attacks::ray::{ray_attack, RayConfig, RayMode};
use crate::error::Result;
use crate::numtheory::Natural;

/// One instrumented ray attack instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchCase {
    pub e: Natural,
    pub p: Natural,
    pub q: Natural,
    pub r_start: Natural,
}

/// Counters and wall time for one case. The counters are deterministic;
/// only `nanos` varies between reruns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub e: Natural,
    pub p: Natural,
    pub q: Natural,
    pub r_start: Natural,
    pub windows: u64,
    pub mults: u64,
    pub nanos: u128,
    pub success: bool,
}

/// Least-squares fit of mults against (r_start - p) for one (e, n) group.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub e: Natural,
    pub n: Natural,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Run every case through the order-multiple ray attack, collect counters,
/// and fit a linear model per (e, n) group. Failures are recorded and the
/// run continues.
pub fn bench_ray(cases: &[BenchCase]) -> Result<(Vec<BenchRecord>, Vec<ScalingFit>)> {
    let mut records = Vec::with_capacity(cases.len());
    for case in cases {
        let n = &case.p * &case.q;
        let cfg = RayConfig {
            r_start: Some(case.r_start.clone()),
            mode: RayMode::OrderMultiple,
            ..RayConfig::default()
        };
        let started = Instant::now();
        let outcome = ray_attack(&case.e, &n, &cfg)?;
        let nanos = started.elapsed().as_nanos();
        records.push(BenchRecord {
            e: case.e.clone(),
            p: case.p.clone(),
            q: case.q.clone(),
            r_start: case.r_start.clone(),
            windows: outcome.work.windows,
            mults: outcome.work.mod_muls,
            nanos,
            success: outcome.success,
        });
    }

    let mut fits: Vec<ScalingFit> = Vec::new();
    let mut groups: Vec<(Natural, Natural)> = records
        .iter()
        .map(|r| (r.e.clone(), &r.p * &r.q))
        .collect();
    groups.sort();
    groups.dedup();
    for (e, n) in groups {
        let points: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.e == e && &r.p * &r.q == n)
            .filter_map(|r| {
                let span = (&r.r_start - &r.p).to_f64()?;
                Some((span, r.mults as f64))
            })
            .collect();
        if points.len() < 2 {
            continue;
        }
        let (slope, intercept, r_squared) = linear_fit(&points);
        fits.push(ScalingFit { e, n, slope, intercept, r_squared, points: points.len() });
    }
    Ok((records, fits))
}

/// Ordinary least squares y = slope*x + intercept with R^2.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return (0.0, sy / n, 0.0);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_res: f64 = points
        .iter()
        .map(|(x, y)| {
            let predicted = slope * x + intercept;
            (y - predicted) * (y - predicted)
        })
        .sum();
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean_y) * (y - mean_y)).sum();
    let r_squared = if ss_tot > 1e-12 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (slope, intercept, r_squared)
}

/// CSV: "e,p,q,r_start,windows,mults,nanos".
pub fn write_bench_csv<W: Write>(w: &mut W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(w, "e,p,q,r_start,windows,mults,nanos")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.e, r.p, r.q, r.r_start, r.windows, r.mults, r.nanos
        )?;
    }
    Ok(())
}

/// Parse a cases file: CSV with header "e,p,q,r_start".
pub fn parse_cases_csv(text: &str) -> Result<Vec<BenchCase>> {
    use crate::error::Error;
    use std::str::FromStr;

    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "e,p,q,r_start" => {}
        _ => {
            return Err(Error::InvalidInput("cases file must start with 'e,p,q,r_start'".into()))
        }
    }
    let mut cases = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::InvalidInput(format!("line {}: expected 4 fields", idx + 1)));
        }
        let parse = |s: &str| {
            Natural::from_str(s)
                .map_err(|_| Error::InvalidInput(format!("line {}: '{s}' is not a number", idx + 1)))
        };
        cases.push(BenchCase {
            e: parse(fields[0])?,
            p: parse(fields[1])?,
            q: parse(fields[2])?,
            r_start: parse(fields[3])?,
        });
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn starting_at_p_takes_one_window() {
        let cases = vec![BenchCase { e: n(7), p: n(11), q: n(13), r_start: n(11) }];
        let (records, _) = bench_ray(&cases).unwrap();
        assert!(records[0].success);
        assert_eq!(records[0].windows, 1);
    }

    #[test]
    fn counters_deterministic() {
        let cases = vec![BenchCase { e: n(7), p: n(101), q: n(149), r_start: n(113) }];
        let (a, _) = bench_ray(&cases).unwrap();
        let (b, _) = bench_ray(&cases).unwrap();
        assert_eq!(a[0].windows, b[0].windows);
        assert_eq!(a[0].mults, b[0].mults);
    }

    #[test]
    fn fit_shape() {
        let points = vec![(1.0, 10.0), (2.0, 20.0), (4.0, 40.0), (8.0, 80.0)];
        let (slope, intercept, r_sq) = linear_fit(&points);
        assert!((slope - 10.0).abs() < 1e-9);
        assert!(intercept.abs() < 1e-9);
        assert!((r_sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cases_csv_roundtrip() {
        let text = "e,p,q,r_start\n7,101,149,113\n";
        let cases = parse_cases_csv(text).unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].e, n(7));
        assert!(parse_cases_csv("wrong\n").is_err());
    }
}
