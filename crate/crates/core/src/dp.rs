//! Exact baselines: the row-by-row dynamic program and an exhaustive
//! enumerator used to check it.

use thiserror::Error;

use crate::exec::Execution;
use crate::model::{Instance, Profile, RevenueCurve};

/// Default cap on `(m + 1)^n` for [`brute_force_all_k`].
pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 2_000_000;

const ROW_CHUNK: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error("exhaustive search needs {needed} profiles, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

// new[k] = max_x prev[k - x] + R_j(x); returns the new row and optionally the argmax x.
fn next_row(
    inst: &Instance,
    j: usize,
    prev: &[i64],
    exec: Execution,
    want_choice: bool,
) -> (Vec<i64>, Vec<u32>) {
    let m = inst.m();
    let row = inst.row(j);
    let len = prev.len() + m;
    let prev_max = prev.len() - 1;
    let mut next = vec![0i64; len];
    let mut choice = if want_choice {
        vec![0u32; len]
    } else {
        Vec::new()
    };
    let cell = |k: usize| -> (i64, u32) {
        let lo = k.saturating_sub(prev_max);
        let hi = k.min(m);
        let mut best = (prev[k - lo] + row[lo], lo as u32);
        for x in lo + 1..=hi {
            let v = prev[k - x] + row[x];
            if v > best.0 {
                best = (v, x as u32);
            }
        }
        best
    };
    if want_choice {
        for k in 0..len {
            (next[k], choice[k]) = cell(k);
        }
    } else {
        exec.for_each_chunk_mut(&mut next, ROW_CHUNK, |ci, out| {
            for (off, slot) in out.iter_mut().enumerate() {
                *slot = cell(ci * ROW_CHUNK + off).0;
            }
        });
    }
    (next, choice)
}

/// Best revenue for every total effort `0..=n*m`, in `O(n^2 m^2)` time and
/// `O(nm)` memory.
pub fn dp_all_k(inst: &Instance) -> RevenueCurve {
    dp_all_k_with(inst, Execution::default())
}

pub fn dp_all_k_with(inst: &Instance, exec: Execution) -> RevenueCurve {
    let mut row = vec![0i64];
    for j in 0..inst.n() {
        row = next_row(inst, j, &row, exec, false).0;
    }
    RevenueCurve(row)
}

/// Full DP table with the chosen `x_j` per state, for profile reconstruction.
///
/// Row `j` has `j*m + 1` entries; every state inside that range is feasible and
/// everything outside it is reported as `None`.
#[derive(Clone, Debug)]
pub struct DpTable {
    m: usize,
    values: Vec<Vec<i64>>,
    choices: Vec<Vec<u32>>,
}

impl DpTable {
    pub fn build(inst: &Instance) -> Self {
        let mut values = vec![vec![0i64]];
        let mut choices = vec![vec![0u32]];
        for j in 0..inst.n() {
            let (v, c) = next_row(inst, j, values.last().unwrap(), Execution::Sequential, true);
            values.push(v);
            choices.push(c);
        }
        DpTable {
            m: inst.m(),
            values,
            choices,
        }
    }

    /// Best revenue over the first `j` projects with exactly `k` efforts.
    pub fn value(&self, j: usize, k: usize) -> Option<i64> {
        self.values.get(j)?.get(k).copied()
    }

    pub fn curve(&self) -> RevenueCurve {
        RevenueCurve(self.values.last().cloned().unwrap_or_default())
    }

    /// An optimal `k`-profile, or `None` when `k > n*m`.
    pub fn profile(&self, k: usize) -> Option<Profile> {
        let n = self.values.len() - 1;
        if k > n * self.m {
            return None;
        }
        let mut x = vec![0u32; n];
        let mut left = k;
        for j in (1..=n).rev() {
            let c = self.choices[j][left];
            x[j - 1] = c;
            left -= c as usize;
        }
        debug_assert_eq!(left, 0);
        Some(Profile(x))
    }
}

/// DP curve together with one optimal profile per `k`.
pub fn dp_all_k_with_profiles(inst: &Instance) -> (RevenueCurve, Vec<Profile>) {
    let table = DpTable::build(inst);
    let profiles = (0..=inst.max_effort())
        .map(|k| table.profile(k).unwrap())
        .collect();
    (table.curve(), profiles)
}

/// Exhaustive maximum over all `(m+1)^n` profiles, grouped by effort.
pub fn brute_force_all_k(inst: &Instance) -> Result<RevenueCurve, DpError> {
    brute_force_all_k_with(inst, DEFAULT_BRUTE_FORCE_BUDGET, Execution::default())
}

pub fn brute_force_all_k_with(
    inst: &Instance,
    budget: u64,
    exec: Execution,
) -> Result<RevenueCurve, DpError> {
    let (n, m) = (inst.n(), inst.m());
    let radix = (m + 1) as u128;
    let needed = (0..n)
        .try_fold(1u128, |acc, _| acc.checked_mul(radix))
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(DpError::BudgetExceeded { needed, budget });
    }
    let total = needed as u64;
    let chunks = total.div_ceil(1 << 14).max(1);
    let per = total.div_ceil(chunks);
    let partials = exec.map_range(chunks as usize, |c| {
        let start = c as u64 * per;
        let end = (start + per).min(total);
        enumerate_range(inst, start, end)
    });
    let mut best: Vec<Option<i64>> = vec![None; n * m + 1];
    for part in partials {
        for (b, p) in best.iter_mut().zip(part) {
            *b = match (*b, p) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            };
        }
    }
    Ok(RevenueCurve(
        best.into_iter()
            .map(|v| v.expect("every effort level is reachable"))
            .collect(),
    ))
}

// Odometer walk over profile codes [start, end) in mixed radix m+1, digit 0 lowest.
fn enumerate_range(inst: &Instance, start: u64, end: u64) -> Vec<Option<i64>> {
    let (n, m) = (inst.n(), inst.m());
    let mut best = vec![None; n * m + 1];
    if start >= end {
        return best;
    }
    let mut digits = vec![0usize; n];
    let mut code = start;
    for d in digits.iter_mut() {
        *d = (code % (m as u64 + 1)) as usize;
        code /= m as u64 + 1;
    }
    let mut effort: usize = digits.iter().sum();
    let mut revenue: i64 = digits
        .iter()
        .enumerate()
        .map(|(j, &x)| inst.revenue(j, x))
        .sum();
    for _ in start..end {
        let slot: &mut Option<i64> = &mut best[effort];
        if slot.is_none_or(|v| revenue > v) {
            *slot = Some(revenue);
        }
        for (j, d) in digits.iter_mut().enumerate() {
            revenue -= inst.revenue(j, *d);
            if *d < m {
                *d += 1;
                effort += 1;
                revenue += inst.revenue(j, *d);
                break;
            }
            effort -= m;
            *d = 0;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::profile_revenue;

    fn two() -> Instance {
        Instance::from_rows(vec![vec![0, 3, 5], vec![0, 2, 6]]).unwrap()
    }

    #[test]
    fn single_project_curve_is_its_row() {
        let inst = Instance::from_rows(vec![vec![0, 3, 5]]).unwrap();
        assert_eq!(dp_all_k(&inst).values(), &[0, 3, 5]);
    }

    #[test]
    fn two_project_example() {
        // all nine profiles: (0,0)=0 (1,0)=3 (0,1)=2 (2,0)=5 (1,1)=5 (0,2)=6
        // (2,1)=7 (1,2)=9 (2,2)=11
        let inst = two();
        assert_eq!(dp_all_k(&inst).values(), &[0, 3, 6, 9, 11]);
    }

    #[test]
    fn profiles_attain_curve() {
        let inst = two();
        let (curve, profiles) = dp_all_k_with_profiles(&inst);
        assert_eq!(profiles[2], Profile(vec![0, 2]));
        for (k, p) in profiles.iter().enumerate() {
            assert_eq!(p.effort(), k);
            assert_eq!(profile_revenue(&inst, p).unwrap(), curve.values()[k]);
        }
    }

    #[test]
    fn table_sentinel_outside_scope() {
        let t = DpTable::build(&two());
        assert_eq!(t.value(0, 0), Some(0));
        assert_eq!(t.value(0, 1), None);
        assert_eq!(t.value(1, 2), Some(5));
        assert_eq!(t.value(1, 3), None);
        assert!(t.profile(5).is_none());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_all_k(&two()).unwrap(), dp_all_k(&two()));
        let forced = Instance::from_rows(vec![vec![0, -4]]).unwrap();
        assert_eq!(brute_force_all_k(&forced).unwrap().values(), &[0, -4]);
    }

    #[test]
    fn brute_force_budget() {
        let inst = Instance::from_rows(vec![vec![0, 1, 2]; 14]).unwrap();
        assert_eq!(
            brute_force_all_k(&inst),
            Err(DpError::BudgetExceeded {
                needed: 4_782_969,
                budget: DEFAULT_BRUTE_FORCE_BUDGET
            })
        );
    }

    #[test]
    fn negative_revenues_are_not_masked() {
        let inst =
            Instance::from_rows(vec![vec![0, -1_000_000_000_000, -2_000_000_000_000]; 3]).unwrap();
        let c = dp_all_k(&inst);
        assert_eq!(c.values()[6], -6_000_000_000_000);
        assert_eq!(c, brute_force_all_k(&inst).unwrap());
    }

    #[test]
    fn execution_modes_agree() {
        let rows: Vec<Vec<i64>> = (0..300)
            .map(|j| {
                vec![
                    0,
                    (j * 7 % 13) as i64 - 6,
                    (j * 5 % 11) as i64 - 3,
                    (j % 4) as i64,
                ]
            })
            .collect();
        let inst = Instance::from_rows(rows).unwrap();
        assert_eq!(
            dp_all_k_with(&inst, Execution::Sequential),
            dp_all_k_with(&inst, Execution::Parallel)
        );
        assert_eq!(dp_all_k(&inst), DpTable::build(&inst).curve());
        let small = Instance::from_rows(vec![vec![0, 5, -2, 7]; 9]).unwrap();
        assert_eq!(
            brute_force_all_k_with(&small, 1 << 20, Execution::Sequential),
            brute_force_all_k_with(&small, 1 << 20, Execution::Parallel)
        );
    }
}
