//! Wall-clock timing sweeps behind `effort bench`.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};

use effort_core::convex::convex_all_k_with;
use effort_core::dp::dp_all_k_with;
use effort_core::exec::Execution;
use effort_core::gen::{generate, Family, GenParams};
use effort_core::model::Instance;
use effort_core::solve::{solve_at, solve_curve, Algorithm};

#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub algos: Vec<Algorithm>,
    pub sizes: Vec<usize>,
    pub m: usize,
    pub seed: u64,
    pub family: Family,
    pub range: (i64, i64),
    /// Single budget to time; `None` times the whole curve.
    pub k: Option<usize>,
    pub reps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub algo: Algorithm,
    pub n: usize,
    pub m: usize,
    pub k_range: String,
    pub wall: Duration,
    pub est_peak_bytes: u64,
}

/// Seed of the instance timed for `(n, m)`. Every solver in a sweep sees
/// the same instance for a given cell.
pub fn cell_seed(seed: u64, n: usize, m: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 8) ^ m as u64
}

/// Rough upper bound on the working set of one solve, in bytes. Counts the
/// instance table and the solver's own arrays, not allocator overhead.
pub fn estimate_peak_bytes(algo: Algorithm, n: usize, m: usize) -> u64 {
    let (n, m) = (n as u64, m as u64);
    let table = n * (m + 1) * 8;
    let curve = (n * m + 1) * 8;
    let extra = match algo {
        // two rolling rows
        Algorithm::Dp => 2 * curve,
        // 2m heaps of (index, priority) slots plus a position map, and the profile
        Algorithm::Greedy => 2 * m * n * 24 + n * 4 + curve,
        // order, prefix sums and three arrays per residue class
        Algorithm::Convex => n * 8 + (n + 1) * 8 + m * 3 * (n + 1) * 8 + curve,
        // pairs, f, g, and the convolution with its arg-max
        Algorithm::M2 => n * 24 + (n + 1) * 8 + (2 * n + 1) * 8 + 2 * curve,
        Algorithm::Auto => 0,
    };
    table + extra
}

/// One untimed warm-up, then the median of `reps` timed runs.
pub fn time_median<F: FnMut() -> Result<()>>(reps: usize, mut f: F) -> Result<Duration> {
    f()?;
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed());
    }
    times.sort_unstable();
    Ok(times[times.len() / 2])
}

/// Runs the solver once; the result is discarded.
pub fn run_once(inst: &Instance, algo: Algorithm, k: Option<usize>, exec: Execution) -> Result<()> {
    match (algo, k) {
        (_, Some(k)) => {
            std::hint::black_box(solve_at(inst, algo, k, false)?);
        }
        (Algorithm::Dp, None) => {
            std::hint::black_box(dp_all_k_with(inst, exec));
        }
        (Algorithm::Convex, None) => {
            std::hint::black_box(convex_all_k_with(inst, exec)?);
        }
        (_, None) => {
            std::hint::black_box(solve_curve(inst, algo)?);
        }
    }
    Ok(())
}

pub fn bench_cell(
    plan: &BenchPlan,
    algo: Algorithm,
    n: usize,
    exec: Execution,
) -> Result<BenchRow> {
    let params = GenParams::new(n, plan.m, cell_seed(plan.seed, n, plan.m))
        .family(plan.family)
        .range(plan.range.0, plan.range.1);
    let inst = generate(&params)?;
    let algo = algo.resolve(&inst);
    if !algo.applies_to(&inst) {
        bail!(
            "{algo} does not apply to {} instances with m = {}",
            plan.family,
            plan.m
        );
    }
    let k_range = match plan.k {
        Some(k) if k > inst.max_effort() => bail!("k = {k} exceeds n*m = {}", inst.max_effort()),
        Some(k) => k.to_string(),
        None => format!("0-{}", inst.max_effort()),
    };
    let wall = time_median(plan.reps, || run_once(&inst, algo, plan.k, exec))?;
    Ok(BenchRow {
        algo,
        n,
        m: plan.m,
        k_range,
        wall,
        est_peak_bytes: estimate_peak_bytes(algo, n, plan.m),
    })
}

pub fn run_plan(plan: &BenchPlan) -> Result<Vec<BenchRow>> {
    if plan.algos.is_empty() || plan.sizes.is_empty() {
        bail!("bad bench parameters: need at least one algorithm and one size");
    }
    if plan.sizes.contains(&0) || plan.m == 0 {
        bail!("bad bench parameters: n and m must be at least 1");
    }
    let mut rows = Vec::new();
    for &n in &plan.sizes {
        for &algo in &plan.algos {
            rows.push(bench_cell(plan, algo, n, Execution::default())?);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("algo,n,m,k_range,wall_ms,est_peak_bytes\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{:.3},{}",
            r.algo,
            r.n,
            r.m,
            r.k_range,
            r.wall.as_secs_f64() * 1e3,
            r.est_peak_bytes
        )
        .unwrap();
    }
    out
}
