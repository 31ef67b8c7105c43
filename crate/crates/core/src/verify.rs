//! Cross-verification: run every applicable solver on an instance, compare
//! full curves against the dynamic program, and audit the greedy trajectory.

use std::fmt;

use crate::dp::{self, DpError};
use crate::exec::Execution;
use crate::greedy::Greedy;
use crate::model::{Instance, RevenueCurve};
use crate::pairs::{is_reducible, profile_diff};
use crate::solve::{solve_curve, Algorithm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub k: usize,
    pub expected: Option<i64>,
    pub actual: Option<i64>,
}

/// One solver's curve compared with the reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCheck {
    pub algo: String,
    pub outcome: Result<Option<Mismatch>, String>,
}

impl CurveCheck {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Ok(None))
    }
}

pub fn compare_curves(
    algo: &str,
    reference: &RevenueCurve,
    candidate: &RevenueCurve,
) -> CurveCheck {
    let mismatch = reference.first_mismatch(candidate).map(|k| Mismatch {
        k,
        expected: reference.get(k),
        actual: candidate.get(k),
    });
    CurveCheck {
        algo: algo.to_string(),
        outcome: Ok(mismatch),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrajectoryIssue {
    /// The step from `k` to `k + 1` has a reducible difference.
    Reducible {
        k: usize,
    },
    /// Total movement of the step reached `2 m^2`.
    Movement {
        k: usize,
        moved: usize,
    },
    /// A heap entry or the running revenue disagreed with the profile.
    Audit {
        k: usize,
        detail: String,
    },
    Failed(String),
}

impl fmt::Display for TrajectoryIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryIssue::Reducible { k } => {
                write!(f, "step {k}->{} has a reducible diff", k + 1)
            }
            TrajectoryIssue::Movement { k, moved } => {
                write!(f, "step {k}->{} moves {moved} efforts", k + 1)
            }
            TrajectoryIssue::Audit { k, detail } => write!(f, "audit after step to {k}: {detail}"),
            TrajectoryIssue::Failed(e) => write!(f, "greedy failed: {e}"),
        }
    }
}

/// Walks the whole greedy trajectory and checks, for every step, that the
/// difference is irreducible and moves fewer than `2 m^2` efforts. With
/// `audit_heaps`, every heap is also recomputed after every step.
pub fn audit_greedy_trajectory(inst: &Instance, audit_heaps: bool) -> Vec<TrajectoryIssue> {
    let mut issues = Vec::new();
    let mut g = match Greedy::new(inst) {
        Ok(g) => g,
        Err(e) => return vec![TrajectoryIssue::Failed(e.to_string())],
    };
    let m = inst.m();
    let mut prev = g.profile();
    while g.effort() < inst.max_effort() {
        let k = g.effort();
        if let Err(e) = g.advance() {
            issues.push(TrajectoryIssue::Failed(e.to_string()));
            break;
        }
        let cur = g.profile();
        let (a, b) = profile_diff(m, &prev, &cur);
        if is_reducible(&a, &b) {
            issues.push(TrajectoryIssue::Reducible { k });
        }
        let moved = a.sum() + b.sum();
        if moved >= 2 * m * m {
            issues.push(TrajectoryIssue::Movement { k, moved });
        }
        if audit_heaps {
            if let Err(detail) = g.audit() {
                issues.push(TrajectoryIssue::Audit { k: k + 1, detail });
            }
        }
        prev = cur;
    }
    issues
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Cap on `(m + 1)^n` for the exhaustive check.
    pub brute_force_budget: u64,
    pub audit_heaps: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            brute_force_budget: dp::DEFAULT_BRUTE_FORCE_BUDGET,
            audit_heaps: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CurveCheck>,
    pub trajectory: Vec<TrajectoryIssue>,
    /// `(algorithm, reason)` for solvers that did not apply.
    pub skipped: Vec<(String, String)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CurveCheck::passed) && self.trajectory.is_empty()
    }

    pub fn first_failure(&self) -> Option<String> {
        for c in &self.checks {
            match &c.outcome {
                Ok(None) => {}
                Ok(Some(mm)) => {
                    return Some(format!(
                        "{}: k={} expected={} actual={}",
                        c.algo,
                        mm.k,
                        fmt_opt(mm.expected),
                        fmt_opt(mm.actual)
                    ))
                }
                Err(e) => return Some(format!("{}: {e}", c.algo)),
            }
        }
        self.trajectory
            .first()
            .map(|t| format!("greedy trajectory: {t}"))
    }
}

fn fmt_opt(v: Option<i64>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "MISMATCH" };
            writeln!(f, "{} {}", c.algo, status)?;
        }
        for (algo, why) in &self.skipped {
            writeln!(f, "{algo} skipped ({why})")?;
        }
        let traj = if self.trajectory.is_empty() {
            "ok"
        } else {
            "VIOLATED"
        };
        writeln!(f, "greedy-trajectory {traj}")?;
        match self.first_failure() {
            None => write!(f, "PASS"),
            Some(why) => write!(f, "FAIL {why}"),
        }
    }
}

/// Runs every applicable solver against the dynamic program.
pub fn verify_instance(inst: &Instance, opts: &VerifyOptions) -> VerifyReport {
    let reference = dp::dp_all_k(inst);
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    match dp::brute_force_all_k_with(inst, opts.brute_force_budget, Execution::Sequential) {
        Ok(curve) => checks.push(compare_curves("brute-force", &reference, &curve)),
        Err(DpError::BudgetExceeded { .. }) => {
            skipped.push(("brute-force".into(), "over enumeration budget".into()))
        }
    }
    for algo in [Algorithm::Greedy, Algorithm::Convex, Algorithm::M2] {
        if !algo.applies_to(inst) {
            let why = if algo == Algorithm::M2 {
                "m != 2"
            } else {
                "not convex"
            };
            skipped.push((algo.to_string(), why.into()));
            continue;
        }
        checks.push(match solve_curve(inst, algo) {
            Ok(curve) => compare_curves(algo.name(), &reference, &curve),
            Err(e) => CurveCheck {
                algo: algo.to_string(),
                outcome: Err(e.to_string()),
            },
        });
    }
    let trajectory = audit_greedy_trajectory(inst, opts.audit_heaps);
    VerifyReport {
        checks,
        trajectory,
        skipped,
    }
}

/// Verifies a batch of instances, one instance per task.
pub fn verify_many(insts: &[Instance], opts: &VerifyOptions, exec: Execution) -> Vec<VerifyReport> {
    exec.map(insts, |inst| verify_instance(inst, opts))
}
