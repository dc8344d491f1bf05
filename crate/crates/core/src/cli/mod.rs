//! Command-line front end: key lifecycle, attack execution, analysis
//! exports, and benchmarks. Exit codes: 0 success, 1 attack or
//! verification failure, 2 invalid input.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis;
use crate::attacks::{self, AttackOutcome, RayConfig, RayDirection, RayMode};
use crate::error::Error;
use crate::numtheory::Natural;
use crate::rsa::{self, AuditPolicy, KeyMaterial, KeygenOptions};

#[derive(Debug, Parser)]
#[command(name = "rayforge", version, about = "Number theory workbench for RSA key systems")]
pub struct Cli {
    /// Seed feeding every randomized path (keygen, probe messages).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Dump work counters to stderr even on success.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key system and write it as a key file.
    Keygen {
        #[arg(long)]
        bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "doubly-safe")]
        doubly_safe: bool,
        /// Fix the public exponent instead of drawing d first.
        #[arg(long)]
        e: Option<Natural>,
    },
    /// Encrypt a value with a public or system key file.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        value: Natural,
    },
    /// Decrypt a value with a private or system key file.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        value: Natural,
    },
    /// Sign a value with a private or system key file.
    Sign {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        value: Natural,
    },
    /// Check a signature against a value; prints true/false.
    Verify {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        value: Natural,
        #[arg(long)]
        sig: Natural,
    },
    /// Run an attack.
    Attack {
        #[command(subcommand)]
        attack: AttackCommand,
    },
    /// Produce analysis tables and exports.
    Analyze {
        #[command(subcommand)]
        analyze: AnalyzeCommand,
    },
    /// Instrumented benchmark runs.
    Bench {
        #[command(subcommand)]
        bench: BenchCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum AttackCommand {
    /// Factor an odd n by the difference-of-squares search.
    Fermat {
        #[arg(long)]
        n: Natural,
        #[arg(long = "max-steps", default_value_t = 1_000_000)]
        max_steps: u64,
    },
    /// Recover a plaintext by iterating the encryption map.
    Iterate {
        #[arg(long)]
        e: Natural,
        #[arg(long)]
        n: Natural,
        #[arg(long)]
        c: Natural,
        #[arg(long = "max-steps", default_value_t = 1_000_000)]
        max_steps: u64,
    },
    /// Recover a plaintext sent under two coprime exponents with one modulus.
    CommonModulus {
        #[arg(long)]
        e1: Natural,
        #[arg(long)]
        e2: Natural,
        #[arg(long)]
        n: Natural,
        #[arg(long)]
        c1: Natural,
        #[arg(long)]
        c2: Natural,
    },
    /// Combine broadcast ciphertexts with the CRT and take the e-th root.
    Broadcast {
        #[arg(long)]
        e: Natural,
        /// Comma-separated modulus:ciphertext pairs, e.g. "55:51,203:13".
        #[arg(long)]
        pairs: String,
    },
    /// Recover d from (e, n) through the iterated order function.
    DirectOmega {
        #[arg(long)]
        e: Natural,
        #[arg(long)]
        n: Natural,
        #[arg(long, default_value = "1")]
        a: Natural,
        #[arg(long, default_value = "1")]
        b: Natural,
    },
    /// The ray attack: scan windows along the totient ray.
    Ray {
        #[arg(long)]
        e: Natural,
        #[arg(long)]
        n: Natural,
        /// Starting ray guess; defaults to floor(sqrt(n)).
        #[arg(long)]
        r: Option<Natural>,
        /// Step between guesses; defaults to max(1, delta/2).
        #[arg(long)]
        step: Option<Natural>,
        #[arg(long, value_enum, default_value_t = RayModeArg::Order)]
        mode: RayModeArg,
        #[arg(long = "max-windows", default_value_t = 1_000_000)]
        max_windows: u64,
        #[arg(long, value_enum, default_value_t = RayDirectionArg::Down)]
        direction: RayDirectionArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RayModeArg {
    Order,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RayDirectionArg {
    Down,
    Up,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Squarefree semiprimes up to a limit with phi and lambda (CSV).
    Table {
        #[arg(long)]
        limit: u64,
    },
    /// Ray samples or the semiprime scatter (CSV).
    Rays {
        #[arg(long)]
        limit: u64,
        /// Comma-separated ray primes; defaults to 2..23.
        #[arg(long)]
        primes: Option<String>,
        #[arg(long, value_enum, default_value_t = RaysKind::Rays)]
        kind: RaysKind,
    },
    /// The (e, d) key lattice for a prime pair (CSV).
    Lattice {
        #[arg(long)]
        p: Natural,
        #[arg(long)]
        q: Natural,
    },
    /// Cycle decomposition of Z_n under x -> x^e.
    Cycles {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        e: Natural,
    },
    /// The subgroup lattice of Z*_n.
    Subgroups {
        #[arg(long)]
        n: u64,
    },
    /// Key-hygiene audit of a key file.
    Audit {
        #[arg(long)]
        key: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::Desk)]
        policy: PolicyArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RaysKind {
    Rays,
    Scatter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Desk,
    #[value(name = "paper-strict")]
    PaperStrict,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Run instrumented ray attacks from a cases CSV file.
    Ray {
        #[arg(long)]
        cases: PathBuf,
    },
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Error> {
    let seed = cli.seed;
    let verbose = cli.verbose;
    match cli.command {
        Command::Keygen { bits, out, doubly_safe, e } => {
            let options = KeygenOptions { doubly_safe, fixed_e: e };
            let ks = rsa::keygen(bits, seed, &options)?;
            let text = rsa::write_key(&KeyMaterial::System(ks));
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| {
                    Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Encrypt { key, value } => {
            let pk = load_public(&key)?;
            println!("{}", rsa::encrypt(&pk, &value)?);
            Ok(0)
        }
        Command::Decrypt { key, value } => {
            let sk = load_private(&key)?;
            println!("{}", rsa::decrypt(&sk, &value)?);
            Ok(0)
        }
        Command::Sign { key, value } => {
            let sk = load_private(&key)?;
            println!("{}", rsa::sign(&sk, &value)?);
            Ok(0)
        }
        Command::Verify { key, value, sig } => {
            let pk = load_public(&key)?;
            let ok = rsa::verify(&pk, &value, &sig)?;
            println!("{ok}");
            Ok(if ok { 0 } else { 1 })
        }
        Command::Attack { attack } => run_attack(attack, seed, verbose),
        Command::Analyze { analyze } => run_analyze(analyze),
        Command::Bench { bench } => run_bench(bench),
    }
}

fn run_attack(cmd: AttackCommand, seed: u64, verbose: bool) -> Result<i32, Error> {
    let outcome = match cmd {
        AttackCommand::Fermat { n, max_steps } => attacks::fermat_factor(&n, max_steps)?,
        AttackCommand::Iterate { e, n, c, max_steps } => {
            let pk = rsa::PublicKey { e, n };
            attacks::iteration_attack(&pk, &c, max_steps)?
        }
        AttackCommand::CommonModulus { e1, e2, n, c1, c2 } => {
            attacks::common_modulus_attack(&e1, &e2, &n, &c1, &c2)?
        }
        AttackCommand::Broadcast { e, pairs } => {
            let parsed = parse_pairs(&pairs)?;
            let keys: Vec<(Natural, Natural)> =
                parsed.iter().map(|(n, _)| (e.clone(), n.clone())).collect();
            let cts: Vec<Natural> = parsed.into_iter().map(|(_, c)| c).collect();
            attacks::broadcast_attack(&keys, &cts)?
        }
        AttackCommand::DirectOmega { e, n, a, b } => {
            attacks::direct_omega_attack(&e, &n, &a, &b, seed)?
        }
        AttackCommand::Ray { e, n, r, step, mode, max_windows, direction } => {
            let cfg = RayConfig {
                r_start: r,
                step,
                direction: match direction {
                    RayDirectionArg::Down => RayDirection::Down,
                    RayDirectionArg::Up => RayDirection::Up,
                },
                max_windows,
                mode: match mode {
                    RayModeArg::Order => RayMode::OrderMultiple,
                    RayModeArg::Phi => RayMode::PhiRecovery,
                },
                probe_seed: seed,
            };
            attacks::ray_attack(&e, &n, &cfg)?
        }
    };
    Ok(report_outcome(&outcome, verbose))
}

/// Print witness lines, the recovered value on the final line, and map
/// the outcome onto the exit code.
fn report_outcome(outcome: &AttackOutcome, verbose: bool) -> i32 {
    for (key, value) in &outcome.witness {
        println!("{key}={value}");
    }
    if outcome.success {
        if let Some(recovered) = &outcome.recovered {
            println!("{recovered}");
        }
        if verbose {
            eprintln!("{}", outcome.work);
        }
        0
    } else {
        eprintln!("attack failed: {}", outcome.work);
        1
    }
}

fn run_analyze(cmd: AnalyzeCommand) -> Result<i32, Error> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io_err = |e: std::io::Error| Error::InvalidInput(format!("cannot write output: {e}"));
    match cmd {
        AnalyzeCommand::Table { limit } => {
            let rows = analysis::semiprime_table(limit)?;
            analysis::write_semiprime_table_csv(&mut out, &rows).map_err(io_err)?;
            Ok(0)
        }
        AnalyzeCommand::Rays { limit, primes, kind } => {
            let primes = match primes {
                Some(list) => parse_u64_list(&list)?,
                None => analysis::DEFAULT_RAY_PRIMES.to_vec(),
            };
            let data = analysis::ray_plot_export(limit, &primes)?;
            match kind {
                RaysKind::Rays => analysis::write_rays_csv(&mut out, &data).map_err(io_err)?,
                RaysKind::Scatter => {
                    analysis::write_scatter_csv(&mut out, &data).map_err(io_err)?
                }
            }
            Ok(0)
        }
        AnalyzeCommand::Lattice { p, q } => {
            let rows = analysis::lattice_export(&p, &q)?;
            analysis::write_lattice_csv(&mut out, &rows).map_err(io_err)?;
            Ok(0)
        }
        AnalyzeCommand::Cycles { n, e } => {
            let decomposition = analysis::cycle_decomposition(n, &e)?;
            let kind = if decomposition.is_permutation() { "permutation" } else { "non-permutation" };
            writeln!(out, "kind={kind}").map_err(io_err)?;
            for (period, count) in decomposition.summary() {
                writeln!(out, "period={period} count={count}").map_err(io_err)?;
            }
            if let analysis::CycleStructure::NonPermutation { tail_nodes, .. } =
                &decomposition.structure
            {
                writeln!(out, "tail_nodes={tail_nodes}").map_err(io_err)?;
            }
            for cycle in decomposition.cycles() {
                let joined: Vec<String> = cycle.iter().map(u64::to_string).collect();
                writeln!(out, "cycle: {}", joined.join(" ")).map_err(io_err)?;
            }
            Ok(0)
        }
        AnalyzeCommand::Subgroups { n } => {
            let set = analysis::subgroup_enumeration(n)?;
            for s in &set.subgroups {
                let joined: Vec<String> = s.elements.iter().map(u64::to_string).collect();
                writeln!(
                    out,
                    "order={} cyclic={} elements={}",
                    s.order,
                    u8::from(s.cyclic),
                    joined.join(" ")
                )
                .map_err(io_err)?;
            }
            Ok(0)
        }
        AnalyzeCommand::Audit { key, policy } => {
            let material = load_key(&key)?;
            let KeyMaterial::System(ks) = material else {
                return Err(Error::InvalidInput(
                    "auditing needs a full system key file".into(),
                ));
            };
            let policy = match policy {
                PolicyArg::Desk => AuditPolicy::desk(),
                PolicyArg::PaperStrict => AuditPolicy::paper_strict(),
            };
            let report = rsa::audit_key(&ks, &policy)?;
            for finding in &report.findings {
                writeln!(out, "{finding}").map_err(io_err)?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn run_bench(cmd: BenchCommand) -> Result<i32, Error> {
    match cmd {
        BenchCommand::Ray { cases } => {
            let text = fs::read_to_string(&cases).map_err(|e| {
                Error::InvalidInput(format!("cannot read {}: {e}", cases.display()))
            })?;
            let cases = analysis::parse_cases_csv(&text)?;
            let (records, fits) = analysis::bench_ray(&cases)?;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            analysis::write_bench_csv(&mut out, &records)
                .map_err(|e| Error::InvalidInput(format!("cannot write output: {e}")))?;
            for fit in &fits {
                eprintln!(
                    "fit e={} n={} slope={:.3} intercept={:.3} r_squared={:.6} points={}",
                    fit.e, fit.n, fit.slope, fit.intercept, fit.r_squared, fit.points
                );
            }
            Ok(0)
        }
    }
}

fn load_key(path: &PathBuf) -> Result<KeyMaterial, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    rsa::read_key(&text)
}

fn load_public(path: &PathBuf) -> Result<rsa::PublicKey, Error> {
    load_key(path)?
        .as_public()
        .ok_or_else(|| Error::InvalidInput("key file holds no public half".into()))
}

fn load_private(path: &PathBuf) -> Result<rsa::PrivateKey, Error> {
    load_key(path)?
        .as_private()
        .ok_or_else(|| Error::InvalidInput("key file holds no private half".into()))
}

fn parse_pairs(text: &str) -> Result<Vec<(Natural, Natural)>, Error> {
    use std::str::FromStr;
    let mut pairs = Vec::new();
    for part in text.split(',') {
        let (n, c) = part.trim().split_once(':').ok_or_else(|| {
            Error::InvalidInput(format!("'{part}' is not a modulus:ciphertext pair"))
        })?;
        let parse = |s: &str| {
            Natural::from_str(s.trim())
                .map_err(|_| Error::InvalidInput(format!("'{s}' is not a number")))
        };
        pairs.push((parse(n)?, parse(c)?));
    }
    Ok(pairs)
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("'{s}' is not a number")))
        })
        .collect()
}
