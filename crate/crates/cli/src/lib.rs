//! Command-line front end: instance generation, solving, verification, pair
//! enumeration and timing sweeps. Every command writes plain text or CSV.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use effort_core::exec::Execution;
use effort_core::gen::{generate, Family, GenParams, DEFAULT_RANGE};
use effort_core::model::{Instance, Profile};
use effort_core::pairs::{self, DEFAULT_MAX_M};
use effort_core::solve::{solve_at, solve_curve, solve_curve_with_profiles, Algorithm};
use effort_core::verify::{verify_instance, verify_many, VerifyOptions};

pub mod bench;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "effort", version, about = "Exact effort-distribution solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a seeded random instance as JSON.
    Gen(GenArgs),
    /// Optimal revenue at a single budget k.
    Solve(SolveArgs),
    /// Optimal revenue for every budget k = 0..n*m.
    SolveAll(SolveAllArgs),
    /// Compare every applicable solver against the dynamic program.
    Verify(VerifyArgs),
    /// List the irreducible unit-gap pairs over 1..m.
    Pairs(PairsArgs),
    /// Time solvers over a size sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GenOpts {
    #[arg(long)]
    pub n: Option<usize>,
    /// Efforts per project; defaults to 2 for the m2 family.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "uniform")]
    pub family: Family,
    /// Inclusive value range as `lo,hi`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Option<(i64, i64)>,
}

impl GenOpts {
    fn m_or_default(&self) -> Result<usize> {
        match (self.m, self.family) {
            (Some(m), _) => Ok(m),
            (None, Family::M2) => Ok(2),
            (None, _) => bail!("--m is required"),
        }
    }

    fn params(&self, n: usize, seed: u64) -> Result<GenParams> {
        let (lo, hi) = self.range.unwrap_or(DEFAULT_RANGE);
        Ok(GenParams::new(n, self.m_or_default()?, seed)
            .family(self.family)
            .range(lo, hi))
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub gen: GenOpts,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "auto")]
    pub algo: Algorithm,
    /// Append an optimal profile column.
    #[arg(long)]
    pub profile: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveAllArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "auto")]
    pub algo: Algorithm,
    #[arg(long)]
    pub profile: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Instance file. Without it, a seeded sweep is generated instead.
    #[arg(long, conflicts_with = "count")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GenOpts,
    /// Number of instances in the sweep, seeded seed, seed+1, ...
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long, default_value_t = effort_core::dp::DEFAULT_BRUTE_FORCE_BUDGET)]
    pub brute_force_budget: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PairsArgs {
    #[arg(long)]
    pub m: usize,
    /// Largest m accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_M)]
    pub cap: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated solvers.
    #[arg(long, value_delimiter = ',', default_value = "greedy,dp")]
    pub algo: Vec<Algorithm>,
    /// Comma-separated project counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "uniform")]
    pub family: Family,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Option<(i64, i64)>,
    /// Time a single budget instead of the whole curve.
    #[arg(long)]
    pub k: Option<usize>,
    /// Timed repetitions per cell; the median is reported.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi, got `{s}`"))?;
    let lo = lo
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = hi
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo},{hi}"));
    }
    Ok((lo, hi))
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => EXIT_OK,
        Ok(Outcome::Fail) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::SolveAll(a) => cmd_solve_all(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Pairs(a) => cmd_pairs(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_gen(a: &GenArgs) -> Result<Outcome> {
    let n = a.gen.n.context("--n is required")?;
    let inst = generate(&a.gen.params(n, a.gen.seed)?)?;
    emit(a.output.as_deref(), &inst.to_json())?;
    Ok(Outcome::Pass)
}

fn csv_header(profile: bool) -> &'static str {
    if profile {
        "k,revenue,profile\n"
    } else {
        "k,revenue\n"
    }
}

fn csv_row(out: &mut String, k: usize, revenue: i64, profile: Option<&Profile>) {
    match profile {
        Some(p) => writeln!(out, "{k},{revenue},{p}"),
        None => writeln!(out, "{k},{revenue}"),
    }
    .unwrap();
}

fn cmd_solve(a: &SolveArgs) -> Result<Outcome> {
    let inst = load_instance(&a.input)?;
    let (rev, profile) = solve_at(&inst, a.algo, a.k, a.profile)?;
    let mut out = csv_header(a.profile).to_string();
    csv_row(&mut out, a.k, rev, profile.as_ref());
    emit(a.output.as_deref(), &out)?;
    Ok(Outcome::Pass)
}

/// CSV body of `solve-all`, shared with the tests.
pub fn solve_all_csv(inst: &Instance, algo: Algorithm, profile: bool) -> Result<String> {
    let mut out = csv_header(profile).to_string();
    if profile {
        let (curve, profiles) = solve_curve_with_profiles(inst, algo)?;
        for (k, (&rev, p)) in curve.values().iter().zip(&profiles).enumerate() {
            csv_row(&mut out, k, rev, Some(p));
        }
    } else {
        let curve = solve_curve(inst, algo)?;
        for (k, &rev) in curve.values().iter().enumerate() {
            csv_row(&mut out, k, rev, None);
        }
    }
    Ok(out)
}

fn cmd_solve_all(a: &SolveAllArgs) -> Result<Outcome> {
    let inst = load_instance(&a.input)?;
    emit(
        a.output.as_deref(),
        &solve_all_csv(&inst, a.algo, a.profile)?,
    )?;
    Ok(Outcome::Pass)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let opts = VerifyOptions {
        brute_force_budget: a.brute_force_budget,
        audit_heaps: true,
    };
    let mut out = String::new();
    let passed = match &a.input {
        Some(path) => {
            let report = verify_instance(&load_instance(path)?, &opts);
            writeln!(out, "{report}").unwrap();
            report.passed()
        }
        None => {
            let n = a.gen.n.context("--input or --n is required")?;
            let count = a.count.unwrap_or(1);
            let insts = (0..count)
                .map(|i| {
                    generate(&a.gen.params(n, a.gen.seed.wrapping_add(i))?).map_err(Into::into)
                })
                .collect::<Result<Vec<_>>>()?;
            let reports = verify_many(&insts, &opts, Execution::default());
            let mut failures = 0;
            for (i, r) in reports.iter().enumerate() {
                let seed = a.gen.seed.wrapping_add(i as u64);
                match r.first_failure() {
                    None => writeln!(out, "seed={seed} PASS"),
                    Some(why) => {
                        failures += 1;
                        writeln!(out, "seed={seed} FAIL {why}")
                    }
                }
                .unwrap();
            }
            writeln!(
                out,
                "{} of {} instances passed",
                reports.len() - failures,
                reports.len()
            )
            .unwrap();
            failures == 0
        }
    };
    emit(a.output.as_deref(), &out)?;
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_pairs(a: &PairsArgs) -> Result<Outcome> {
    let list = pairs::enumerate_unit_gap_irreducible_capped(a.m, a.cap)?;
    let mut out = String::new();
    for p in &list {
        writeln!(out, "{p}").unwrap();
    }
    writeln!(out, "count {}", list.len()).unwrap();
    emit(a.output.as_deref(), &out)?;
    Ok(Outcome::Pass)
}

fn cmd_bench(a: &BenchArgs) -> Result<Outcome> {
    let plan = bench::BenchPlan {
        algos: a.algo.clone(),
        sizes: a.sizes.clone(),
        m: a.m,
        seed: a.seed,
        family: a.family,
        range: a.range.unwrap_or(DEFAULT_RANGE),
        k: a.k,
        reps: a.reps,
    };
    let rows = bench::run_plan(&plan)?;
    emit(a.output.as_deref(), &bench::to_csv(&rows))?;
    Ok(Outcome::Pass)
}
