//! Regret-enabled greedy: builds an optimal `k`-profile for every `k` from
//! `0` to `n*m`, one unit of effort at a time.
//!
//! Each step applies the best move whose difference pattern is one of the
//! irreducible unit-gap pairs `(A, B)`: raise distinct projects by the
//! elements of `A`, lower other distinct projects by the elements of `B`.
//! Because some optimal `(k+1)`-profile is always reachable this way from an
//! optimal `k`-profile, every profile on the trajectory is optimal.
//!
//! Candidates come from `2m` addressable heaps. `DO_d` holds each project
//! that can take `d` more efforts, keyed by the revenue gained; `UNDO_d`
//! holds each project that can give up `d` efforts, keyed by the revenue
//! lost. For a pair with `a + b` elements only the best `a + b` entries of
//! each heap can matter: a move touches at most `a + b` projects, so at
//! most `a + b - 1` of them can collide with the entry a group would prefer.

use std::sync::Arc;

use thiserror::Error;

use crate::heap::{AddressableHeap, Direction};
use crate::model::{Instance, Profile, RevenueCurve};
use crate::pairs::{self, PairsError, UnitGapPair};

/// Extra candidates taken from each heap beyond the `a + b` a pair needs.
/// Raising it must never change a result.
pub const POOL_SLACK: usize = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreedyError {
    #[error("all {0} efforts are already allocated")]
    ExhaustedEfforts(usize),
    #[error(transparent)]
    Pairs(#[from] PairsError),
}

#[derive(Clone, Copy, Debug)]
pub struct GreedyConfig {
    pub pool_slack: usize,
    pub max_m: usize,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            pool_slack: POOL_SLACK,
            max_m: pairs::DEFAULT_MAX_M,
        }
    }
}

/// One applied (or proposed) step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    /// Index into the pair list.
    pub pair: usize,
    /// `(project, d)`: project gains `d` efforts.
    pub raises: Vec<(usize, u32)>,
    /// `(project, d)`: project loses `d` efforts.
    pub lowers: Vec<(usize, u32)>,
    pub gain: i64,
}

impl Move {
    /// `I'_d`: projects raised by exactly `d`.
    pub fn raised_by(&self, d: u32) -> Vec<usize> {
        self.raises
            .iter()
            .filter(|e| e.1 == d)
            .map(|e| e.0)
            .collect()
    }

    /// `J'_d`: projects lowered by exactly `d`.
    pub fn lowered_by(&self, d: u32) -> Vec<usize> {
        self.lowers
            .iter()
            .filter(|e| e.1 == d)
            .map(|e| e.0)
            .collect()
    }

    pub fn projects(&self) -> impl Iterator<Item = usize> + '_ {
        self.raises.iter().chain(&self.lowers).map(|e| e.0)
    }
}

/// One pick group of a pair: choose `pick` entries from a heap's pool.
#[derive(Clone, Copy)]
struct Group {
    d: u32,
    raise: bool,
    pick: usize,
}

pub struct Greedy<'a> {
    inst: &'a Instance,
    x: Vec<u32>,
    effort: usize,
    revenue: i64,
    raise_heaps: Vec<AddressableHeap>,
    lower_heaps: Vec<AddressableHeap>,
    pairs: Arc<[UnitGapPair]>,
    pool_slack: usize,
    raise_pools: Vec<Vec<(usize, i64)>>,
    lower_pools: Vec<Vec<(usize, i64)>>,
    raise_need: Vec<usize>,
    lower_need: Vec<usize>,
}

impl<'a> Greedy<'a> {
    /// State at the all-zero profile.
    pub fn new(inst: &'a Instance) -> Result<Self, GreedyError> {
        Self::with_config(inst, GreedyConfig::default())
    }

    pub fn with_config(inst: &'a Instance, cfg: GreedyConfig) -> Result<Self, GreedyError> {
        let pairs = pairs::enumerate_unit_gap_irreducible_capped(inst.m(), cfg.max_m)?;
        Ok(Self::with_pairs(inst, pairs.into(), cfg.pool_slack))
    }

    /// Reuses an already enumerated pair list for `inst.m()`.
    pub fn with_pairs(inst: &'a Instance, pairs: Arc<[UnitGapPair]>, pool_slack: usize) -> Self {
        let (n, m) = (inst.n(), inst.m());
        debug_assert!(pairs.iter().all(|p| p.a.universe() == m));
        let mut raise_need = vec![0; m];
        let mut lower_need = vec![0; m];
        for p in pairs.iter() {
            let t = p.touched() + pool_slack;
            for d in 1..=m {
                if p.a_mult(d) > 0 {
                    raise_need[d - 1] = raise_need[d - 1].max(t);
                }
                if p.b_mult(d) > 0 {
                    lower_need[d - 1] = lower_need[d - 1].max(t);
                }
            }
        }
        let mut g = Greedy {
            inst,
            x: vec![0; n],
            effort: 0,
            revenue: 0,
            raise_heaps: (0..m)
                .map(|_| AddressableHeap::new(Direction::Max, n))
                .collect(),
            lower_heaps: (0..m)
                .map(|_| AddressableHeap::new(Direction::Min, n))
                .collect(),
            pairs,
            pool_slack,
            raise_pools: vec![Vec::new(); m],
            lower_pools: vec![Vec::new(); m],
            raise_need,
            lower_need,
        };
        for i in 0..n {
            g.refresh(i);
        }
        g
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn pairs(&self) -> &[UnitGapPair] {
        &self.pairs
    }

    pub fn profile(&self) -> Profile {
        Profile(self.x.clone())
    }

    pub fn allocation(&self) -> &[u32] {
        &self.x
    }

    pub fn effort(&self) -> usize {
        self.effort
    }

    pub fn revenue(&self) -> i64 {
        self.revenue
    }

    /// `DO_d` (gain of `d` more efforts per project).
    pub fn raise_heap(&self, d: usize) -> &AddressableHeap {
        &self.raise_heaps[d - 1]
    }

    /// `UNDO_d` (loss of `d` fewer efforts per project).
    pub fn lower_heap(&self, d: usize) -> &AddressableHeap {
        &self.lower_heaps[d - 1]
    }

    fn raise_value(&self, i: usize, d: usize) -> Option<i64> {
        let x = self.x[i] as usize;
        (x + d <= self.inst.m()).then(|| self.inst.revenue(i, x + d) - self.inst.revenue(i, x))
    }

    fn lower_value(&self, i: usize, d: usize) -> Option<i64> {
        let x = self.x[i] as usize;
        (x >= d).then(|| self.inst.revenue(i, x) - self.inst.revenue(i, x - d))
    }

    // Re-derives project i's entries in all 2m heaps from x_i.
    fn refresh(&mut self, i: usize) {
        for d in 1..=self.inst.m() {
            let up = self.raise_value(i, d);
            self.raise_heaps[d - 1].set(i, up);
            let down = self.lower_value(i, d);
            self.lower_heaps[d - 1].set(i, down);
        }
    }

    fn fill_pools(&mut self, raise_need: &[usize], lower_need: &[usize]) {
        for d in 0..self.inst.m() {
            self.raise_heaps[d].top(raise_need[d], &mut self.raise_pools[d]);
            self.lower_heaps[d].top(lower_need[d], &mut self.lower_pools[d]);
        }
    }

    /// Best move with the difference pattern of pair `c`, or `None` when no
    /// disjoint selection exists from the current profile.
    pub fn best_move_for_pair(&mut self, c: usize) -> Option<Move> {
        let p = &self.pairs[c];
        let t = p.touched() + self.pool_slack;
        let m = self.inst.m();
        let raise_need: Vec<usize> = (1..=m)
            .map(|d| if p.a_mult(d) > 0 { t } else { 0 })
            .collect();
        let lower_need: Vec<usize> = (1..=m)
            .map(|d| if p.b_mult(d) > 0 { t } else { 0 })
            .collect();
        self.fill_pools(&raise_need, &lower_need);
        self.search(c)
    }

    fn search(&self, c: usize) -> Option<Move> {
        let p = &self.pairs[c];
        let t = p.touched() + self.pool_slack;
        let m = self.inst.m();
        let mut groups = Vec::new();
        for d in 1..=m {
            if p.a_mult(d) > 0 {
                groups.push(Group {
                    d: d as u32,
                    raise: true,
                    pick: p.a_mult(d),
                });
            }
            if p.b_mult(d) > 0 {
                groups.push(Group {
                    d: d as u32,
                    raise: false,
                    pick: p.b_mult(d),
                });
            }
        }
        // signed gains, best first, truncated to this pair's pool size
        let pools: Vec<Vec<(usize, i64)>> = groups
            .iter()
            .map(|g| {
                let src = if g.raise {
                    &self.raise_pools[g.d as usize - 1]
                } else {
                    &self.lower_pools[g.d as usize - 1]
                };
                src.iter()
                    .take(t)
                    .map(|&(i, v)| (i, if g.raise { v } else { -v }))
                    .collect()
            })
            .collect();
        if groups
            .iter()
            .zip(&pools)
            .any(|(g, pool)| pool.len() < g.pick)
        {
            return None;
        }
        // optimistic bound for groups[gi..], ignoring disjointness
        let mut tail = vec![0i64; groups.len() + 1];
        for gi in (0..groups.len()).rev() {
            tail[gi] = tail[gi + 1]
                + pools[gi][..groups[gi].pick]
                    .iter()
                    .map(|e| e.1)
                    .sum::<i64>();
        }
        let mut s = Search {
            groups: &groups,
            pools: &pools,
            tail: &tail,
            chosen: Vec::with_capacity(p.touched()),
            best: None,
        };
        s.dfs(0, 0, 0, 0);
        let (gain, key) = s.best?;
        let mut mv = Move {
            pair: c,
            raises: Vec::new(),
            lowers: Vec::new(),
            gain,
        };
        let mut at = 0;
        for g in &groups {
            for &i in &key[at..at + g.pick] {
                if g.raise {
                    mv.raises.push((i, g.d));
                } else {
                    mv.lowers.push((i, g.d));
                }
            }
            at += g.pick;
        }
        Some(mv)
    }

    /// Best move over all pairs; ties keep the earliest pair.
    pub fn best_move(&mut self) -> Option<Move> {
        let (rn, ln) = (self.raise_need.clone(), self.lower_need.clone());
        self.fill_pools(&rn, &ln);
        let mut best: Option<Move> = None;
        for c in 0..self.pairs.len() {
            if let Some(mv) = self.search(c) {
                if best.as_ref().is_none_or(|b| mv.gain > b.gain) {
                    best = Some(mv);
                }
            }
        }
        best
    }

    /// Moves from the current optimal `k`-profile to an optimal
    /// `(k+1)`-profile and returns the move applied.
    pub fn advance(&mut self) -> Result<Move, GreedyError> {
        if self.effort >= self.inst.max_effort() {
            return Err(GreedyError::ExhaustedEfforts(self.inst.max_effort()));
        }
        let mv = self
            .best_move()
            .expect("a single-unit raise exists below full effort");
        self.apply(&mv);
        Ok(mv)
    }

    fn apply(&mut self, mv: &Move) {
        for &(i, d) in &mv.raises {
            self.x[i] += d;
        }
        for &(j, d) in &mv.lowers {
            self.x[j] -= d;
        }
        for i in mv.projects() {
            self.refresh(i);
        }
        self.effort += 1;
        self.revenue += mv.gain;
    }

    /// Recomputes every heap entry from the profile and compares.
    pub fn audit(&self) -> Result<(), String> {
        for d in 1..=self.inst.m() {
            let (up, down) = (&self.raise_heaps[d - 1], &self.lower_heaps[d - 1]);
            up.check().map_err(|e| format!("DO_{d}: {e}"))?;
            down.check().map_err(|e| format!("UNDO_{d}: {e}"))?;
            for i in 0..self.inst.n() {
                if up.priority(i) != self.raise_value(i, d) {
                    return Err(format!("DO_{d} entry for project {i} is stale"));
                }
                if down.priority(i) != self.lower_value(i, d) {
                    return Err(format!("UNDO_{d} entry for project {i} is stale"));
                }
            }
        }
        let direct: i64 = self
            .x
            .iter()
            .enumerate()
            .map(|(i, &x)| self.inst.revenue(i, x as usize))
            .sum();
        if direct != self.revenue {
            return Err(format!(
                "running revenue {} but profile earns {direct}",
                self.revenue
            ));
        }
        Ok(())
    }
}

struct Search<'s> {
    groups: &'s [Group],
    pools: &'s [Vec<(usize, i64)>],
    tail: &'s [i64],
    chosen: Vec<usize>,
    best: Option<(i64, Vec<usize>)>,
}

impl Search<'_> {
    // Chooses groups[gi]'s remaining picks from pools[gi][from..]; `picked` of
    // them are already in `chosen`.
    fn dfs(&mut self, gi: usize, from: usize, picked: usize, gain: i64) {
        if gi == self.groups.len() {
            self.offer(gain);
            return;
        }
        let want = self.groups[gi].pick;
        if picked == want {
            self.dfs(gi + 1, 0, 0, gain);
            return;
        }
        let pool = &self.pools[gi];
        let left = want - picked;
        for at in from..pool.len() {
            if pool.len() - at < left {
                break;
            }
            let optimistic =
                gain + pool[at..at + left].iter().map(|e| e.1).sum::<i64>() + self.tail[gi + 1];
            if self.best.as_ref().is_some_and(|b| optimistic < b.0) {
                // later entries are no better
                break;
            }
            let (i, v) = pool[at];
            if self.chosen.contains(&i) {
                continue;
            }
            self.chosen.push(i);
            self.dfs(gi, at + 1, picked + 1, gain + v);
            self.chosen.pop();
        }
    }

    fn offer(&mut self, gain: i64) {
        if self.best.as_ref().is_some_and(|b| gain < b.0) {
            return;
        }
        // each group's picks in index order
        let mut key = self.chosen.clone();
        let mut at = 0;
        for g in self.groups {
            key[at..at + g.pick].sort_unstable();
            at += g.pick;
        }
        if self.best.as_ref().is_none_or(|b| gain > b.0 || key < b.1) {
            self.best = Some((gain, key));
        }
    }
}

/// Optimal revenue for every `k` in `0..=n*m`.
pub fn solve_all_k(inst: &Instance) -> Result<RevenueCurve, GreedyError> {
    let mut g = Greedy::new(inst)?;
    let mut curve = Vec::with_capacity(inst.max_effort() + 1);
    curve.push(0);
    while g.effort() < inst.max_effort() {
        g.advance()?;
        curve.push(g.revenue());
    }
    Ok(RevenueCurve(curve))
}

/// Curve plus the profile trajectory `x^(0), ..., x^(nm)`.
pub fn solve_all_k_with_profiles(
    inst: &Instance,
) -> Result<(RevenueCurve, Vec<Profile>), GreedyError> {
    let mut g = Greedy::new(inst)?;
    let mut curve = vec![0];
    let mut profiles = vec![g.profile()];
    while g.effort() < inst.max_effort() {
        g.advance()?;
        curve.push(g.revenue());
        profiles.push(g.profile());
    }
    Ok((RevenueCurve(curve), profiles))
}

/// Runs to `k` and returns the revenue and profile there.
pub fn solve_k(inst: &Instance, k: usize) -> Result<(i64, Profile), GreedyError> {
    let mut g = Greedy::new(inst)?;
    while g.effort() < k {
        g.advance()?;
    }
    Ok((g.revenue(), g.profile()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::dp_all_k;
    use crate::model::profile_revenue;
    use crate::pairs::{is_reducible, profile_diff};

    fn two() -> Instance {
        Instance::from_rows(vec![vec![0, 3, 5], vec![0, 2, 6]]).unwrap()
    }

    #[test]
    fn initial_heaps() {
        let inst = two();
        let g = Greedy::new(&inst).unwrap();
        assert_eq!(g.raise_heap(1).priority(0), Some(3));
        assert_eq!(g.raise_heap(1).priority(1), Some(2));
        assert_eq!(g.raise_heap(2).priority(0), Some(5));
        assert_eq!(g.raise_heap(2).priority(1), Some(6));
        assert!(g.lower_heap(1).is_empty() && g.lower_heap(2).is_empty());
        assert_eq!(g.raise_heap(1).len(), inst.n());
        g.audit().unwrap();
    }

    #[test]
    fn best_move_per_pair_at_origin() {
        let inst = two();
        let mut g = Greedy::new(&inst).unwrap();
        let mv = g.best_move_for_pair(0).unwrap();
        assert_eq!((mv.raised_by(1), mv.gain), (vec![0], 3));
        // pattern ({2},{1}) needs a project to lower
        assert_eq!(g.best_move_for_pair(1), None);
    }

    // every legal (raise by 2, lower by 1) pair on distinct projects
    fn exhaustive_two_one(inst: &Instance, x: &[u32]) -> Option<i64> {
        let mut best = None;
        for i in 0..inst.n() {
            for j in 0..inst.n() {
                let (xi, xj) = (x[i] as usize, x[j] as usize);
                if i == j || xi + 2 > inst.m() || xj < 1 {
                    continue;
                }
                let g = inst.revenue(i, xi + 2)
                    - inst.revenue(i, xi)
                    - (inst.revenue(j, xj) - inst.revenue(j, xj - 1));
                best = best.max(Some(g));
            }
        }
        best
    }

    #[test]
    fn colliding_candidates_are_resolved() {
        let inst = Instance::from_rows(vec![vec![0, 0, 10, 10], vec![0, 1, 1, 1]]).unwrap();
        let mut g = Greedy::new(&inst).unwrap();
        // reach x = (1, 0) by hand
        g.apply(&Move {
            pair: 0,
            raises: vec![(0, 1)],
            lowers: vec![],
            gain: 0,
        });
        g.audit().unwrap();
        let c = g
            .pairs()
            .iter()
            .position(|p| p.to_string() == "A={2} B={1}")
            .unwrap();
        // project 0 tops both DO_2 and UNDO_1; only (i=1, j=0) is legal and
        // gains 1 - 0 = 1
        let mv = g.best_move_for_pair(c).unwrap();
        assert_eq!(Some(mv.gain), exhaustive_two_one(&inst, g.allocation()));
        assert_eq!((mv.raised_by(2), mv.lowered_by(1)), (vec![1], vec![0]));
    }

    #[test]
    fn example_trajectory() {
        let inst = two();
        let mut g = Greedy::new(&inst).unwrap();
        let first = g.advance().unwrap();
        assert_eq!((first.raises.clone(), g.revenue()), (vec![(0, 1)], 3));
        let second = g.advance().unwrap();
        assert_eq!((second.gain, g.revenue()), (3, 6));
        assert_eq!(g.allocation(), &[0, 2]);
        while g.effort() < 4 {
            g.advance().unwrap();
        }
        assert_eq!(g.allocation(), &[2, 2]);
        assert_eq!(g.advance(), Err(GreedyError::ExhaustedEfforts(4)));
        assert_eq!(solve_all_k(&inst).unwrap().values(), &[0, 3, 6, 9, 11]);
    }

    #[test]
    fn single_project_and_zero_revenues() {
        let inst = Instance::from_rows(vec![vec![0, -3, 8, 1]]).unwrap();
        assert_eq!(solve_all_k(&inst).unwrap().values(), inst.row(0));
        let zero = Instance::from_rows(vec![vec![0; 4]; 5]).unwrap();
        assert!(solve_all_k(&zero).unwrap().values().iter().all(|&v| v == 0));
    }

    fn lcg_instance(seed: u64, n: usize, m: usize) -> Instance {
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let rows = (0..n)
            .map(|_| {
                let mut r = vec![0i64];
                for _ in 0..m {
                    s = s
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    r.push((s >> 33) as i64 % 21 - 10);
                }
                r
            })
            .collect();
        Instance::from_rows(rows).unwrap()
    }

    #[test]
    fn matches_dp_with_invariants() {
        for seed in 0..60 {
            let m = 1 + seed as usize % 4;
            let n = 1 + (seed as usize * 7) % 12;
            let inst = lcg_instance(seed, n, m);
            let mut g = Greedy::new(&inst).unwrap();
            let dp = dp_all_k(&inst);
            let mut prev = g.profile();
            while g.effort() < inst.max_effort() {
                let mv = g.advance().unwrap();
                g.audit().unwrap();
                assert_eq!(g.revenue(), dp.values()[g.effort()], "seed {seed}");
                let cur = g.profile();
                let (a, b) = profile_diff(m, &prev, &cur);
                assert!(!is_reducible(&a, &b));
                assert!(a.sum() + b.sum() < 2 * m * m);
                assert_eq!(mv.projects().count(), a.len() + b.len());
                assert_eq!(profile_revenue(&inst, &cur).unwrap(), g.revenue());
                prev = cur;
            }
        }
    }

    #[test]
    fn larger_pools_change_nothing() {
        for seed in 100..130 {
            let m = 2 + seed as usize % 3;
            let inst = lcg_instance(seed, 10, m);
            let base = solve_all_k(&inst).unwrap();
            let mut wide = Greedy::with_config(
                &inst,
                GreedyConfig {
                    pool_slack: 4,
                    ..Default::default()
                },
            )
            .unwrap();
            let mut g = Greedy::new(&inst).unwrap();
            while g.effort() < inst.max_effort() {
                let a = g.best_move().unwrap();
                let b = wide.best_move().unwrap();
                assert_eq!(a.gain, b.gain);
                g.advance().unwrap();
                wide.advance().unwrap();
                assert_eq!(wide.revenue(), base.values()[wide.effort()]);
            }
        }
    }

    #[test]
    fn deterministic_trajectory() {
        let inst = lcg_instance(9, 15, 3);
        assert_eq!(
            solve_all_k_with_profiles(&inst).unwrap(),
            solve_all_k_with_profiles(&inst).unwrap()
        );
        let (rev, p) = solve_k(&inst, 7).unwrap();
        assert_eq!(p, solve_all_k_with_profiles(&inst).unwrap().1[7]);
        assert_eq!(rev, dp_all_k(&inst).values()[7]);
    }
}
