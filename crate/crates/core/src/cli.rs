//! Command-line front end. [`run`] parses arguments and returns the exit
//! code and captured output streams so the binary stays a thin wrapper.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::classifier::{classify, format_listing, moduli_interpretation_applies, ClassificationEntry, GroupLabel};
use crate::geometry::{PointSet, RiemannPoint, C64, DEFAULT_TOL};
use crate::moduli::{phi_check, random_lambda, verify_group_law, LambdaTuple, Preset, DEFAULT_ENUMERATION_BOUND};
use crate::oracle::stabilizer;
use crate::witness::{polyhedral_orbit, witness, OrbitSeed, SpecialOrbit, WitnessError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ENTRY_ABSENT: i32 = 3;
pub const EXIT_SEARCH_EXHAUSTED: i32 = 4;

/// Largest `n` covered by `verify --exhaustive-small`.
const EXHAUSTIVE_SMALL_LIMIT: u64 = 7;

#[derive(Debug, Parser)]
#[command(name = "m0n", version, about = "Finite stabilizers of point sets on the Riemann sphere")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Chordal tolerance, in (0, 1e-3].
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Also write standard output to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every stabilizer group and component index for n points.
    Classify {
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
    /// Build and verify a point set realizing one classification entry.
    Witness {
        #[arg(allow_hyphen_values = true)]
        n: String,
        /// Entry such as "D_5, (1, 1, 0)" or "(0)".
        #[arg(long)]
        entry: String,
        #[arg(long, default_value_t = crate::witness::DEFAULT_RETRY_BOUND)]
        retry_bound: usize,
    },
    /// Round-trip every entry for each n in a range through witness and oracle.
    Verify {
        n_min: u64,
        n_max: u64,
        /// Also check that sampled sets with n <= 7 only produce listed entries.
        #[arg(long)]
        exhaustive_small: bool,
        /// Configurations sampled per n for --exhaustive-small.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::witness::DEFAULT_RETRY_BOUND)]
        retry_bound: usize,
    },
    /// Check the permutation action on normalized configurations.
    Moduli {
        n: usize,
        /// Check the composition law and faithfulness.
        #[arg(long)]
        group_law: bool,
        /// Check the isomorphism between the configuration and set stabilizers.
        #[arg(long)]
        phi: bool,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One of generic, d5, z2, s4.
        #[arg(long)]
        preset: Option<String>,
        /// Comma separated coordinates, e.g. "2+1i,5".
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if !(cli.tol > 0.0 && cli.tol <= 1e-3) {
        return Outcome::usage(format!("--tol must lie in (0, 1e-3], got {}", cli.tol));
    }
    let outcome = dispatch(&cli);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &outcome.stdout) {
            return Outcome {
                code: EXIT_FAILURE,
                stdout: outcome.stdout,
                stderr: format!("{}error: cannot write {}: {e}\n", outcome.stderr, path.display()),
            };
        }
    }
    outcome
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify { n } => cmd_classify(n, cli.json),
        Command::Witness { n, entry, retry_bound } => cmd_witness(n, entry, *retry_bound, cli),
        Command::Verify { n_min, n_max, exhaustive_small, samples, seed, retry_bound } => {
            cmd_verify(*n_min, *n_max, *exhaustive_small, *samples, *seed, *retry_bound, cli)
        }
        Command::Moduli { n, group_law, phi, trials, seed, preset, lambda } => {
            cmd_moduli(*n, *group_law, *phi, *trials, *seed, preset.as_deref(), lambda.as_deref(), cli)
        }
    }
}

fn parse_n(s: &str) -> Result<u64, Outcome> {
    match s.trim().parse::<i64>() {
        Ok(n) if n >= 1 => Ok(n as u64),
        Ok(n) => Err(Outcome::usage(format!("n must be at least 1, got {n}"))),
        Err(_) => Err(Outcome::usage(format!("cannot parse n from {s:?}"))),
    }
}

fn small_n_warning(n: u64) -> String {
    if (3..=4).contains(&n) && !moduli_interpretation_applies(n) {
        format!("warning: n = {n}; the moduli space interpretation needs n >= 5\n")
    } else {
        String::new()
    }
}

pub fn cmd_classify(n: &str, as_json: bool) -> Outcome {
    let n = match parse_n(n) {
        Ok(n) => n,
        Err(o) => return o,
    };
    let entries = match classify(n) {
        Ok(e) => e,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let stdout = if as_json {
        serde_json::to_string_pretty(&entries).expect("entries serialize") + "\n"
    } else {
        format_listing(&entries)
    };
    Outcome { code: EXIT_OK, stdout, stderr: small_n_warning(n) }
}

fn cmd_witness(n: &str, entry: &str, retry_bound: usize, cli: &Cli) -> Outcome {
    let n = match parse_n(n) {
        Ok(n) => n,
        Err(o) => return o,
    };
    if retry_bound < 1 {
        return Outcome::usage("--retry-bound must be at least 1");
    }
    let entry: ClassificationEntry = match entry.parse() {
        Ok(e) => e,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    if entry.group == GroupLabel::Infinite && classify(n).is_ok_and(|c| c.contains(&entry)) {
        // any n <= 2 points have an infinite stabilizer
        let pts = PointSet::new([RiemannPoint::ZERO, RiemannPoint::INFINITY][..n as usize].to_vec(), cli.tol)
            .expect("0 and ∞ are separated");
        let stdout = if cli.json {
            format!("{}\n", json!({ "n": n, "entry": entry, "points": pts }))
        } else {
            pts.to_strings().join("\n") + "\n"
        };
        return Outcome { code: EXIT_OK, stdout, stderr: String::new() };
    }
    match witness(n, &entry, cli.tol, retry_bound) {
        Ok(w) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&w).expect("witness serializes") + "\n"
            } else {
                w.points.to_strings().join("\n") + "\n"
            };
            let stderr = format!(
                "{}{} verified: {} points, stabilizer order {}, attempt {}\n",
                small_n_warning(n),
                w.entry,
                w.points.len(),
                w.stabilizer.order(),
                w.attempts
            );
            Outcome { code: EXIT_OK, stdout, stderr }
        }
        Err(e @ WitnessError::NotInClassification { .. }) => {
            Outcome { code: EXIT_ENTRY_ABSENT, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
        Err(e @ WitnessError::WitnessSearchExhausted { .. }) => {
            Outcome { code: EXIT_SEARCH_EXHAUSTED, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
        Err(e) => Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[derive(Debug, Clone, serde::Serialize)]
struct VerifyRow {
    n: u64,
    entry: ClassificationEntry,
    pass: bool,
    detail: String,
}

fn verify_entry(n: u64, entry: &ClassificationEntry, tol: f64, retry_bound: usize) -> VerifyRow {
    let (pass, detail) = match witness(n, entry, tol, retry_bound) {
        Ok(w) => {
            let got = w.stabilizer.entry();
            let ok = got == *entry && w.points.len() as u64 == n;
            (ok, format!("order {}, attempt {}", w.stabilizer.order(), w.attempts))
        }
        Err(e) => (false, e.to_string()),
    };
    VerifyRow { n, entry: entry.clone(), pass, detail }
}

#[derive(Debug, Clone, serde::Serialize)]
struct SampleReport {
    n: u64,
    sampled: usize,
    /// Oracle results that are missing from the classification.
    outside: Vec<String>,
}

/// Pools of points with many symmetric subsets.
fn structured_pools(tol: f64) -> Vec<Vec<RiemannPoint>> {
    use SpecialOrbit::*;
    let mut pools = Vec::new();
    let union = |group: GroupLabel, tags: &[SpecialOrbit]| -> Vec<RiemannPoint> {
        tags.iter()
            .flat_map(|&t| {
                polyhedral_orbit(group, OrbitSeed::Special(t), tol).expect("special orbit").points().to_vec()
            })
            .collect()
    };
    pools.push(union(GroupLabel::A5, &[V12, V20, V30]));
    pools.push(union(GroupLabel::S4, &[V6, V8, V12]));
    for m in 2..=8u64 {
        let mut p = vec![RiemannPoint::ZERO, RiemannPoint::INFINITY];
        p.extend((0..2 * m).map(|j| RiemannPoint::unit(j as f64 / (2 * m) as f64)));
        p.extend(
            (0..m).map(|j| RiemannPoint::finite(C64::from_polar(2.0, std::f64::consts::TAU * j as f64 / m as f64))),
        );
        pools.push(p);
    }
    let mut line = vec![RiemannPoint::INFINITY];
    line.extend((-3..=3).map(|x| RiemannPoint::real(x as f64)));
    pools.push(line);
    pools
}

fn sample_small(n: u64, samples: usize, seed: u64, tol: f64) -> SampleReport {
    let entries = classify(n).unwrap_or_default();
    let pools = structured_pools(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut configs = Vec::with_capacity(samples);
    for s in 0..samples {
        let pts: Vec<RiemannPoint> = if s % 4 == 0 {
            (0..n)
                .map(|_| RiemannPoint::finite(C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))))
                .collect()
        } else {
            let pool = &pools[rng.random_range(0..pools.len())];
            if (pool.len() as u64) < n {
                continue;
            }
            rand::seq::index::sample(&mut rng, pool.len(), n as usize).into_iter().map(|i| pool[i]).collect()
        };
        configs.push(pts);
    }
    let sampled = configs.len();
    let mut outside: Vec<String> = configs
        .into_par_iter()
        .filter_map(|pts| {
            let set = PointSet::new(pts, tol).ok()?;
            let r = stabilizer(&set).ok()?;
            (!entries.contains(&r.entry())).then(|| r.entry().to_string())
        })
        .collect();
    outside.sort();
    outside.dedup();
    SampleReport { n, sampled, outside }
}

fn cmd_verify(
    n_min: u64,
    n_max: u64,
    exhaustive_small: bool,
    samples: usize,
    seed: u64,
    retry_bound: usize,
    cli: &Cli,
) -> Outcome {
    if n_min < 3 || n_min > n_max {
        return Outcome::usage(format!("need 3 <= n_min <= n_max, got {n_min}..{n_max}"));
    }
    if retry_bound < 1 {
        return Outcome::usage("--retry-bound must be at least 1");
    }
    let jobs: Vec<(u64, ClassificationEntry)> =
        (n_min..=n_max).flat_map(|n| classify(n).expect("n >= 3").into_iter().map(move |e| (n, e))).collect();
    let rows: Vec<VerifyRow> = jobs.par_iter().map(|(n, e)| verify_entry(*n, e, cli.tol, retry_bound)).collect();
    let reports: Vec<SampleReport> = if exhaustive_small {
        (n_min..=n_max.min(EXHAUSTIVE_SMALL_LIMIT)).map(|n| sample_small(n, samples, seed, cli.tol)).collect()
    } else {
        Vec::new()
    };
    let failed = rows.iter().filter(|r| !r.pass).count();
    let outside = reports.iter().map(|r| r.outside.len()).sum::<usize>();
    let ok = failed == 0 && outside == 0;

    let stdout = if cli.json {
        let v = json!({ "rows": rows, "exhaustive_small": reports, "failed": failed, "passed": ok });
        serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
    } else {
        let mut s = String::new();
        for r in &rows {
            let status = if r.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{:>4}  {:<28}  {status}  {}", r.n, r.entry.to_string(), r.detail);
        }
        for r in &reports {
            let _ = writeln!(
                s,
                "exhaustive-small n={}: {} configurations, {} result(s) outside the classification{}",
                r.n,
                r.sampled,
                r.outside.len(),
                if r.outside.is_empty() { String::new() } else { format!(": {}", r.outside.join("; ")) }
            );
        }
        let _ = writeln!(s, "{} entries, {} passed, {} failed", rows.len(), rows.len() - failed, failed);
        s
    };
    let warn: String = (n_min..=n_max.min(4)).map(small_n_warning).collect();
    Outcome { code: if ok { EXIT_OK } else { EXIT_FAILURE }, stdout, stderr: warn }
}

#[allow(clippy::too_many_arguments)]
fn cmd_moduli(
    n: usize,
    group_law: bool,
    phi: bool,
    trials: usize,
    seed: u64,
    preset: Option<&str>,
    lambda: Option<&str>,
    cli: &Cli,
) -> Outcome {
    if n < 4 {
        return Outcome::usage(format!("moduli needs n >= 4, got {n}"));
    }
    let (do_law, do_phi) = if group_law || phi { (group_law, phi) } else { (true, n >= 5) };
    if do_phi && n < 5 {
        return Outcome::usage("--phi needs n >= 5");
    }
    let mut json_out = serde_json::Map::new();
    let mut text = String::new();
    let mut ok = true;

    if do_law {
        match verify_group_law(n, trials, seed, cli.tol) {
            Ok(r) => {
                ok &= r.passed;
                let _ = writeln!(
                    text,
                    "group law n={} trials={}: max deviation {:.3e}, closed form vs definition {:.3e} {}",
                    r.n,
                    r.trials,
                    r.max_deviation,
                    r.max_closed_form_deviation,
                    if r.max_deviation < 10.0 * cli.tol { "PASS" } else { "FAIL" }
                );
                if let Some(f) = &r.faithfulness {
                    let _ = writeln!(
                        text,
                        "faithfulness: {}/{} non-identity permutations move λ{} {}",
                        f.moved,
                        f.checked,
                        if f.exhaustive { " (all of S_n)" } else { "" },
                        if f.moved == f.checked { "PASS" } else { "FAIL" }
                    );
                }
                json_out.insert("group_law".into(), serde_json::to_value(&r).expect("report serializes"));
            }
            Err(e) => return Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("error: {e}\n") },
        }
    }

    if do_phi {
        let lam = match (preset, lambda) {
            (Some(_), Some(_)) => return Outcome::usage("give at most one of --preset and --lambda"),
            (Some(p), None) => p.parse::<Preset>().and_then(|p| p.lambda(cli.tol)),
            (None, Some(s)) => s.parse::<LambdaTuple>(),
            (None, None) => Ok(random_lambda(n, &mut ChaCha8Rng::seed_from_u64(seed))),
        };
        let lam = match lam {
            Ok(l) => l,
            Err(e) => return Outcome::usage(e.to_string()),
        };
        if lam.n() != n {
            return Outcome::usage(format!("configuration has {} marked points, expected n = {n}", lam.n()));
        }
        match phi_check(&lam, cli.tol, DEFAULT_ENUMERATION_BOUND) {
            Ok(r) => {
                ok &= r.passed;
                let _ = writeln!(
                    text,
                    "phi λ={}: |G_λ| = {}, |stabilizer| = {}, homomorphism {}/{} pairs, stabilizes {} {}",
                    r.lambda,
                    r.g_lambda_order,
                    r.stabilizer_order,
                    r.pairs_passed,
                    r.pairs_checked,
                    r.all_stabilize,
                    if r.passed { "PASS" } else { "FAIL" }
                );
                json_out.insert("phi".into(), serde_json::to_value(&r).expect("report serializes"));
            }
            Err(e) => return Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("error: {e}\n") },
        }
    }

    json_out.insert("passed".into(), ok.into());
    let stdout =
        if cli.json { serde_json::to_string_pretty(&json_out).expect("report serializes") + "\n" } else { text };
    Outcome { code: if ok { EXIT_OK } else { EXIT_FAILURE }, stdout, stderr: String::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::polyhedral_group;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("m0n").chain(args.iter().copied()))
    }

    #[test]
    fn classify_small() {
        let o = run_args(&["classify", "1"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "infinity\n"));
        let o = run_args(&["classify", "3"]);
        assert!(o.stderr.starts_with("warning"));
        assert_eq!(run_args(&["classify", "0"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["classify", "-4"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["classify", "abc"]).code, EXIT_USAGE);
    }

    #[test]
    fn classify_json() {
        let o = run_args(&["classify", "5", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 5);
        assert!(o.stderr.is_empty());
    }

    #[test]
    fn witness_exit_codes() {
        let o = run_args(&["witness", "5", "--entry", "Z_2,(1,2)"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(o.stdout.lines().count(), 5);
        assert_eq!(run_args(&["witness", "5", "--entry", "A_5,(1,0,0,0)"]).code, EXIT_ENTRY_ABSENT);
        assert_eq!(run_args(&["witness", "5", "--entry", "nonsense"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["witness", "2", "--entry", "infinity"]).code, EXIT_OK);
    }

    #[test]
    fn tolerance_validated() {
        assert_eq!(run_args(&["--tol", "0", "classify", "5"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["--tol", "0.01", "classify", "5"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["--tol", "1e-9", "classify", "5"]).code, EXIT_OK);
    }

    #[test]
    fn verify_range() {
        let o = run_args(&["verify", "3", "3"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert_eq!(run_args(&["verify", "2", "4"]).code, EXIT_USAGE);
        let o = run_args(&["verify", "5", "5", "--exhaustive-small", "--samples", "40"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
    }

    #[test]
    fn moduli_checks() {
        let o = run_args(&["moduli", "5", "--phi", "--lambda", "2+1i,5"]);
        assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
        let o = run_args(&["moduli", "7", "--phi", "--preset", "d5"]);
        assert!(o.stdout.contains("|G_λ| = 10"), "{}", o.stdout);
        assert_eq!(run_args(&["moduli", "5", "--phi", "--preset", "d5"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["moduli", "3"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["moduli", "6", "--group-law", "--trials", "30"]).code, 0);
    }

    #[test]
    fn polyhedral_pool_sizes() {
        assert_eq!(polyhedral_group(GroupLabel::A5).len(), 60);
        let pools = structured_pools(DEFAULT_TOL);
        assert_eq!(pools[0].len(), 62);
        assert_eq!(pools[1].len(), 26);
    }
}
