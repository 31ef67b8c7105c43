//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use effort_cli::bench::{bench_cell, BenchPlan};
use effort_core::convex::{convex_all_k, convex_single_k};
use effort_core::dp::{brute_force_all_k_with, dp_all_k};
use effort_core::exec::Execution;
use effort_core::gen::{generate, Family, GenParams, DEFAULT_RANGE};
use effort_core::greedy::solve_all_k;
use effort_core::maxplus::{
    check_oscillating_concave, compute_f, compute_g, has_nonincreasing_increments,
    maxplus_concave_osc, maxplus_naive, solve_all_k_m2, split_groups,
};
use effort_core::model::Instance;
use effort_core::pairs::enumerate_unit_gap_irreducible;
use effort_core::solve::Algorithm;
use effort_core::verify::audit_greedy_trajectory;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `count` seeded instances with `n` and `m` drawn by `shape`.
fn sweep(
    count: u64,
    base: u64,
    family: Family,
    shape: impl Fn(&mut u64) -> (usize, usize),
) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let mut s = base ^ i.wrapping_mul(0xD6E8_FEB8_6659_FD93);
            let (n, m) = shape(&mut s);
            generate(&GenParams::new(n, m, splitmix(&mut s)).family(family)).unwrap()
        })
        .collect()
}

fn pick(s: &mut u64, lo: usize, hi: usize) -> usize {
    lo + (splitmix(s) % (hi - lo + 1) as u64) as usize
}

type Verdict = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

fn within(limit: Duration, took: Duration, detail: String) -> Verdict {
    if took <= limit {
        Ok(detail)
    } else {
        Err(format!("{detail}; took {took:.2?}, limit {limit:?}"))
    }
}

fn c1_pair_counts() -> Verdict {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=5)
        .map(|m| enumerate_unit_gap_irreducible(m).unwrap().len())
        .collect();
    if counts != [1, 2, 5, 11, 27] {
        return Err(format!("counts {counts:?}"));
    }
    let show = |m| {
        enumerate_unit_gap_irreducible(m)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
    };
    if show(2) != ["A={1} B={}", "A={2} B={1}"] {
        return Err(format!("m=2 listing {:?}", show(2)));
    }
    let m3 = [
        "A={1} B={}",
        "A={2} B={1}",
        "A={3} B={2}",
        "A={3} B={1,1}",
        "A={2,2} B={3}",
    ];
    if show(3) != m3 {
        return Err(format!("m=3 listing {:?}", show(3)));
    }
    within(
        Duration::from_secs(1),
        start.elapsed(),
        "counts 1,2,5,11,27; m=2,3 listings exact".into(),
    )
}

fn greedy_instances() -> Vec<Instance> {
    sweep(200, 0x6772_6565, Family::Uniform, |s| {
        (pick(s, 1, 40), pick(s, 1, 4))
    })
}

fn c2_greedy_matches_dp(insts: &[Instance]) -> Verdict {
    let start = Instant::now();
    for (i, inst) in insts.iter().enumerate() {
        let want = dp_all_k(inst);
        let got = solve_all_k(inst).map_err(|e| format!("instance {i}: {e}"))?;
        if let Some(k) = want.first_mismatch(&got) {
            return Err(format!(
                "instance {i}: k={k} dp={:?} greedy={:?}",
                want.get(k),
                got.get(k)
            ));
        }
    }
    within(
        Duration::from_secs(30),
        start.elapsed(),
        format!("{} instances, every k", insts.len()),
    )
}

fn c3_trajectory(insts: &[Instance]) -> Verdict {
    let start = Instant::now();
    let mut steps = 0;
    for (i, inst) in insts.iter().enumerate() {
        // heap audits are covered by unit tests; here only the step invariants
        if let Some(issue) = audit_greedy_trajectory(inst, false).first() {
            return Err(format!("instance {i}: {issue}"));
        }
        steps += inst.max_effort();
    }
    within(
        Duration::from_secs(30),
        start.elapsed(),
        format!("{steps} steps irreducible with movement < 2m^2"),
    )
}

fn c4_dp_vs_brute_force() -> Verdict {
    let insts = sweep(100, 0x6272_7574, Family::Uniform, |s| {
        let m = pick(s, 1, 4);
        let max_n = (1..)
            .take_while(|&n| (m as u64 + 1).pow(n) <= 100_000)
            .last()
            .unwrap() as usize;
        (pick(s, 1, max_n), m)
    });
    let start = Instant::now();
    for (i, inst) in insts.iter().enumerate() {
        let bf = brute_force_all_k_with(inst, 100_000, Execution::default())
            .map_err(|e| e.to_string())?;
        if let Some(k) = dp_all_k(inst).first_mismatch(&bf) {
            return Err(format!("instance {i}: first mismatch at k={k}"));
        }
    }
    within(
        Duration::from_secs(10),
        start.elapsed(),
        "100 instances with (m+1)^n <= 1e5".into(),
    )
}

fn c5_convex() -> Verdict {
    let insts = sweep(100, 0x636f_6e76, Family::Convex, |s| {
        (pick(s, 1, 50), pick(s, 1, 5))
    });
    let start = Instant::now();
    for (i, inst) in insts.iter().enumerate() {
        let want = dp_all_k(inst);
        let all = convex_all_k(inst).map_err(|e| format!("instance {i}: {e}"))?;
        if let Some(k) = want.first_mismatch(&all) {
            return Err(format!("instance {i}: all-k differs at k={k}"));
        }
        for k in 0..=inst.max_effort() {
            let single = convex_single_k(inst, k).map_err(|e| format!("instance {i}: {e}"))?;
            if single != all.values()[k] {
                return Err(format!(
                    "instance {i}: single-k {single} != {} at k={k}",
                    all.values()[k]
                ));
            }
        }
    }
    within(
        Duration::from_secs(10),
        start.elapsed(),
        "100 instances, all-k and single-k".into(),
    )
}

fn c6_m2() -> Verdict {
    let insts = sweep(200, 0x6d32, Family::M2, |s| (pick(s, 1, 50), 2));
    let start = Instant::now();
    for (i, inst) in insts.iter().enumerate() {
        let split = split_groups(inst).map_err(|e| e.to_string())?;
        let f = compute_f(&split.a_group);
        let g = compute_g(&split.b_group);
        if !has_nonincreasing_increments(f.values()) {
            return Err(format!("instance {i}: f increments increase"));
        }
        if let Some(v) = check_oscillating_concave(g.values()).first_violation() {
            return Err(format!("instance {i}: g violates {v:?}"));
        }
        let fast = maxplus_concave_osc(f.values(), g.values())
            .map_err(|e| format!("instance {i}: {e}"))?;
        if fast.h != maxplus_naive(f.values(), g.values()).h {
            return Err(format!("instance {i}: fast convolution differs from naive"));
        }
        let got = solve_all_k_m2(inst).map_err(|e| e.to_string())?;
        if let Some(k) = dp_all_k(inst).first_mismatch(&got) {
            return Err(format!("instance {i}: pipeline differs from dp at k={k}"));
        }
    }
    within(
        Duration::from_secs(10),
        start.elapsed(),
        "200 instances, f/g shape and convolution".into(),
    )
}

fn c7_performance() -> Verdict {
    let start = Instant::now();
    let plan = |reps| BenchPlan {
        algos: vec![],
        sizes: vec![],
        m: 2,
        seed: 7,
        family: Family::Uniform,
        range: DEFAULT_RANGE,
        k: None,
        reps,
    };
    let cell = |algo, n, reps| {
        bench_cell(&plan(reps), algo, n, Execution::default()).map_err(|e| e.to_string())
    };
    let g2k = cell(Algorithm::Greedy, 2000, 3)?.wall;
    let dp2k = cell(Algorithm::Dp, 2000, 3)?.wall;
    if g2k >= dp2k {
        return Err(format!("n=2000: greedy {g2k:.2?} not below dp {dp2k:.2?}"));
    }
    let g10 = cell(Algorithm::Greedy, 10_000, 3)?.wall;
    let g20 = cell(Algorithm::Greedy, 20_000, 3)?.wall;
    let ratio = g20.as_secs_f64() / g10.as_secs_f64();
    if ratio > 3.0 {
        return Err(format!("greedy t(2e4)/t(1e4) = {ratio:.2}"));
    }
    let m2 = cell(Algorithm::M2, 100_000, 1)?.wall;
    if m2 >= Duration::from_secs(5) {
        return Err(format!("m2 at n=1e5 took {m2:.2?}"));
    }
    within(
        Duration::from_secs(120),
        start.elapsed(),
        format!("n=2000 greedy {g2k:.2?} < dp {dp2k:.2?}; ratio {ratio:.2}; m2 n=1e5 {m2:.2?}"),
    )
}

fn c8_determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let exe = env!("CARGO_BIN_EXE_effort");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(exe)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "{args:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        Ok(out.stdout)
    };
    let mut checked = 0;
    for (family, m) in [("uniform", "3"), ("convex", "4"), ("m2", "2")] {
        let path = dir.path().join(format!("{family}.json"));
        let path = path.to_str().unwrap();
        let gen = [
            "gen", "--n", "30", "--m", m, "--seed", "11", "--family", family,
        ];
        let first = run(&gen)?;
        if first != run(&gen)? {
            return Err(format!("gen {family} not byte-identical"));
        }
        std::fs::write(path, &first).map_err(|e| e.to_string())?;
        for algo in ["auto", "dp", "greedy"] {
            let args = ["solve-all", "--input", path, "--algo", algo, "--profile"];
            if run(&args)? != run(&args)? {
                return Err(format!("solve-all {algo} on {family} differs between runs"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} solve-all configurations byte-identical, with profiles"
    ))
}

fn main() {
    let greedy = greedy_instances();
    let criteria: Vec<(&str, Check)> = vec![
        ("1 irreducible pair counts", Box::new(c1_pair_counts)),
        (
            "2 greedy equals dp",
            Box::new(|| c2_greedy_matches_dp(&greedy)),
        ),
        (
            "3 trajectory invariants",
            Box::new(|| c3_trajectory(&greedy)),
        ),
        ("4 dp equals brute force", Box::new(c4_dp_vs_brute_force)),
        ("5 convex fast paths", Box::new(c5_convex)),
        ("6 m=2 pipeline", Box::new(c6_m2)),
        ("7 performance ordering", Box::new(c7_performance)),
        ("8 determinism", Box::new(c8_determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let verdict = check();
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("[PASS] {name}: {detail} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why} ({took:.2?})");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
