//! Linear-time all-`k` solver for `m = 2` via (max,+) convolution.
//!
//! With `a_j = R_j(1)` and `b_j = R_j(2) - R_j(1)`, projects with `a_j > b_j`
//! (group A) behave concavely: their best revenue `f(k)` is the sum of the
//! `k` largest values in the pooled `{a_j, b_j}`. The rest (group B) give an
//! oscillating concave `g`. The answer is `h = f (max,+) g`, and for such a
//! pair the arg-max of `f(i) + g(k - i)` moves by at most one step as `k`
//! grows, so `h` costs `O(1)` per entry.

use std::cmp::Reverse;
use std::fmt;

use thiserror::Error;

use crate::model::{Instance, Profile, RevenueCurve};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaxPlusError {
    #[error("this solver needs m = 2, instance has m = {0}")]
    WrongM(usize),
    #[error("convolution precondition failed: {0}")]
    PreconditionViolated(String),
}

/// A project as seen by the `m = 2` solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pair2 {
    pub project: usize,
    /// `R(1)`
    pub a: i64,
    /// `R(2) - R(1)`
    pub b: i64,
}

impl Pair2 {
    pub fn full(&self) -> i64 {
        self.a + self.b
    }
}

/// Projects split by `a > b` (group A) versus `a <= b` (group B), each kept
/// in order of `R(2)` descending, ties by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSplit {
    pub a_group: Vec<Pair2>,
    pub b_group: Vec<Pair2>,
}

pub fn split_groups(inst: &Instance) -> Result<GroupSplit, MaxPlusError> {
    if inst.m() != 2 {
        return Err(MaxPlusError::WrongM(inst.m()));
    }
    let pairs = (0..inst.n()).map(|j| {
        let a = inst.revenue(j, 1);
        Pair2 {
            project: j,
            a,
            b: inst.revenue(j, 2) - a,
        }
    });
    Ok(split_pairs(pairs.collect()))
}

/// Sorts and splits raw `(a, b)` projects.
pub fn split_pairs(mut pairs: Vec<Pair2>) -> GroupSplit {
    pairs.sort_by_key(|p| (Reverse(p.full()), p.project));
    let (a_group, b_group) = pairs.into_iter().partition(|p| p.a > p.b);
    GroupSplit { a_group, b_group }
}

/// `f(k)`: sum of the `k` largest values pooled from every `{a, b}` of group A.
pub fn compute_f(a_group: &[Pair2]) -> RevenueCurve {
    let mut pool: Vec<i64> = a_group.iter().flat_map(|p| [p.a, p.b]).collect();
    pool.sort_unstable_by(|x, y| y.cmp(x));
    let mut f = Vec::with_capacity(pool.len() + 1);
    f.push(0);
    for v in pool {
        f.push(f.last().unwrap() + v);
    }
    RevenueCurve(f)
}

/// Helper arrays over group B (sorted by `R(2)` descending).
struct BArrays {
    /// `even[t]` = sum of the first `t` full revenues
    even: Vec<i64>,
    /// `suffix_a[t]` = max a over positions `t..`
    suffix_a: Vec<i64>,
    /// `prefix_b[t]` = min b over positions `..=t`
    prefix_b: Vec<i64>,
}

impl BArrays {
    fn new(b_group: &[Pair2]) -> Self {
        let mut even = vec![0i64];
        for p in b_group {
            even.push(even.last().unwrap() + p.full());
        }
        let mut suffix_a: Vec<i64> = b_group.iter().map(|p| p.a).collect();
        for t in (0..suffix_a.len().saturating_sub(1)).rev() {
            suffix_a[t] = suffix_a[t].max(suffix_a[t + 1]);
        }
        let mut prefix_b: Vec<i64> = b_group.iter().map(|p| p.b).collect();
        for t in 1..prefix_b.len() {
            prefix_b[t] = prefix_b[t].min(prefix_b[t - 1]);
        }
        BArrays {
            even,
            suffix_a,
            prefix_b,
        }
    }

    // g(2t+1): either the top t full plus the best lone a beyond position t,
    // or the top t+1 full with the smallest b among them given back.
    fn odd_terms(&self, t: usize) -> (Option<i64>, i64) {
        let spread = self.suffix_a.get(t + 1).map(|&a| self.even[t] + a);
        let shrink = self.even[t + 1] - self.prefix_b[t];
        (spread, shrink)
    }
}

/// `g(k)`: best revenue of `k` efforts within group B, where some optimum
/// leaves at most one project half-filled.
pub fn compute_g(b_group: &[Pair2]) -> RevenueCurve {
    let arr = BArrays::new(b_group);
    let len = 2 * b_group.len() + 1;
    let mut g = vec![0i64; len];
    for (t, &v) in arr.even.iter().enumerate() {
        g[2 * t] = v;
    }
    for t in 0..b_group.len() {
        let (spread, shrink) = arr.odd_terms(t);
        g[2 * t + 1] = spread.map_or(shrink, |s| s.max(shrink));
    }
    RevenueCurve(g)
}

/// Whether each increment is no larger than the one before.
pub fn has_nonincreasing_increments(f: &[i64]) -> bool {
    f.windows(3).all(|w| w[1] - w[0] >= w[2] - w[1])
}

/// First failing instance of one oscillating-concavity condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OscillationViolation {
    pub condition: u8,
    pub k: usize,
    /// The `g` values the inequality was evaluated on, lowest index first.
    pub values: Vec<(usize, i64)>,
}

impl fmt::Display for OscillationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition ({}) fails at k = {}:", self.condition, self.k)?;
        for (i, v) in &self.values {
            write!(f, " g({i})={v}")?;
        }
        Ok(())
    }
}

/// Outcome of each of the five oscillating-concavity conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OscillationReport {
    pub conditions: [Option<OscillationViolation>; 5],
}

impl OscillationReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(Option::is_none)
    }

    pub fn condition_passes(&self, c: u8) -> bool {
        self.conditions[c as usize - 1].is_none()
    }

    pub fn first_violation(&self) -> Option<&OscillationViolation> {
        self.conditions.iter().flatten().next()
    }
}

/// Checks, over every index where all terms exist:
///
/// 1. `g(2k) - g(2k-2) >= g(2k+2) - g(2k)`
/// 2. `g(2k+2) - g(2k+1) >= g(2k+1) - g(2k)`
/// 3. `g(2k+1) - g(2k) <= g(2k) - g(2k-1)`
/// 4. `g(2k+1) - g(2k)` is non-increasing in `k`
/// 5. `g(2k) - g(2k-1)` is non-increasing in `k`
pub fn check_oscillating_concave(g: &[i64]) -> OscillationReport {
    let last = g.len() as isize - 1;
    let at = |i: isize| g[i as usize];
    let witness = |cond: u8, k: isize, idx: &[isize]| OscillationViolation {
        condition: cond,
        k: k as usize,
        values: {
            let mut v: Vec<isize> = idx.to_vec();
            v.sort_unstable();
            v.dedup();
            v.into_iter().map(|i| (i as usize, at(i))).collect()
        },
    };
    let first =
        |cond: u8, lo: isize, need: &dyn Fn(isize) -> Vec<isize>, ok: &dyn Fn(isize) -> bool| {
            (lo..)
                .take_while(|&k| need(k).iter().all(|&i| i <= last))
                .find(|&k| !ok(k))
                .map(|k| witness(cond, k, &need(k)))
        };
    let conditions = [
        first(1, 1, &|k| vec![2 * k - 2, 2 * k, 2 * k + 2], &|k| {
            at(2 * k) - at(2 * k - 2) >= at(2 * k + 2) - at(2 * k)
        }),
        first(2, 0, &|k| vec![2 * k, 2 * k + 1, 2 * k + 2], &|k| {
            at(2 * k + 2) - at(2 * k + 1) >= at(2 * k + 1) - at(2 * k)
        }),
        first(3, 1, &|k| vec![2 * k - 1, 2 * k, 2 * k + 1], &|k| {
            at(2 * k + 1) - at(2 * k) <= at(2 * k) - at(2 * k - 1)
        }),
        first(
            4,
            0,
            &|k| vec![2 * k, 2 * k + 1, 2 * k + 2, 2 * k + 3],
            &|k| at(2 * k + 3) - at(2 * k + 2) <= at(2 * k + 1) - at(2 * k),
        ),
        first(
            5,
            1,
            &|k| vec![2 * k - 1, 2 * k, 2 * k + 1, 2 * k + 2],
            &|k| at(2 * k + 2) - at(2 * k + 1) <= at(2 * k) - at(2 * k - 1),
        ),
    ];
    OscillationReport { conditions }
}

/// `h` together with the smallest maximizing split `i` for each `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convolution {
    pub h: RevenueCurve,
    pub argmax: Vec<usize>,
}

/// Quadratic reference: `h(k) = max f(i) + g(k - i)` over feasible `i`.
pub fn maxplus_naive(f: &[i64], g: &[i64]) -> Convolution {
    assert!(!f.is_empty() && !g.is_empty());
    let len = f.len() + g.len() - 1;
    let mut h = Vec::with_capacity(len);
    let mut argmax = Vec::with_capacity(len);
    for k in 0..len {
        let lo = k.saturating_sub(g.len() - 1);
        let hi = k.min(f.len() - 1);
        let mut best = (f[lo] + g[k - lo], lo);
        for i in lo + 1..=hi {
            let v = f[i] + g[k - i];
            if v > best.0 {
                best = (v, i);
            }
        }
        h.push(best.0);
        argmax.push(best.1);
    }
    Convolution {
        h: RevenueCurve(h),
        argmax,
    }
}

/// `O(len f + len g)` convolution of a concave `f` with an oscillating
/// concave `g`. The split pointer only ever needs to look one step either
/// way, plus the two ends of the feasible window.
pub fn maxplus_concave_osc(f: &[i64], g: &[i64]) -> Result<Convolution, MaxPlusError> {
    if f.is_empty() || g.is_empty() {
        return Err(MaxPlusError::PreconditionViolated("empty sequence".into()));
    }
    if !has_nonincreasing_increments(f) {
        return Err(MaxPlusError::PreconditionViolated(
            "f increments increase".into(),
        ));
    }
    if let Some(v) = check_oscillating_concave(g).first_violation() {
        return Err(MaxPlusError::PreconditionViolated(format!("g: {v}")));
    }
    Ok(maxplus_pointer_walk(f, g))
}

fn maxplus_pointer_walk(f: &[i64], g: &[i64]) -> Convolution {
    let len = f.len() + g.len() - 1;
    let mut h = Vec::with_capacity(len);
    let mut argmax = Vec::with_capacity(len);
    let mut ptr = 0usize;
    for k in 0..len {
        let lo = k.saturating_sub(g.len() - 1);
        let hi = k.min(f.len() - 1);
        let cands = [ptr.saturating_sub(1), ptr, ptr + 1, lo, hi];
        let mut best: Option<(i64, usize)> = None;
        for i in cands.map(|i| i.clamp(lo, hi)) {
            let v = f[i] + g[k - i];
            if best.is_none_or(|(bv, bi)| v > bv || (v == bv && i < bi)) {
                best = Some((v, i));
            }
        }
        let (v, i) = best.unwrap();
        h.push(v);
        argmax.push(i);
        ptr = i;
    }
    Convolution {
        h: RevenueCurve(h),
        argmax,
    }
}

/// Full `m = 2` pipeline: split, build `f` and `g`, convolve.
pub fn solve_all_k_m2(inst: &Instance) -> Result<RevenueCurve, MaxPlusError> {
    Ok(solve_m2_detailed(inst)?.conv.h)
}

/// Intermediate results of the `m = 2` pipeline.
#[derive(Clone, Debug)]
pub struct M2Solution {
    pub split: GroupSplit,
    pub f: RevenueCurve,
    pub g: RevenueCurve,
    pub conv: Convolution,
    /// Set when the structural checks failed and the quadratic convolution
    /// was used instead.
    pub fell_back: bool,
}

pub fn solve_m2_detailed(inst: &Instance) -> Result<M2Solution, MaxPlusError> {
    let split = split_groups(inst)?;
    let f = compute_f(&split.a_group);
    let g = compute_g(&split.b_group);
    let (conv, fell_back) = match maxplus_concave_osc(f.values(), g.values()) {
        Ok(c) => (c, false),
        Err(_) => (maxplus_naive(f.values(), g.values()), true),
    };
    Ok(M2Solution {
        split,
        f,
        g,
        conv,
        fell_back,
    })
}

impl M2Solution {
    /// An optimal `k`-profile rebuilt from the recorded splits.
    pub fn profile(&self, n: usize, k: usize) -> Option<Profile> {
        let &i = self.conv.argmax.get(k)?;
        let mut x = vec![0u32; n];
        // group A: top i pooled values; a_j > b_j so a_j is always taken first
        let mut pool: Vec<(i64, bool, usize)> = self
            .split
            .a_group
            .iter()
            .flat_map(|p| [(p.a, false, p.project), (p.b, true, p.project)])
            .collect();
        pool.sort_by_key(|&(v, second, j)| (Reverse(v), second, j));
        for &(_, _, j) in &pool[..i] {
            x[j] += 1;
        }
        let bg = &self.split.b_group;
        let rest = k - i;
        let t = rest / 2;
        if rest.is_multiple_of(2) {
            for p in &bg[..t] {
                x[p.project] = 2;
            }
        } else {
            let arr = BArrays::new(bg);
            let (spread, shrink) = arr.odd_terms(t);
            match spread.filter(|&s| s > shrink) {
                Some(_) => {
                    for p in &bg[..t] {
                        x[p.project] = 2;
                    }
                    let lone = (t + 1..bg.len())
                        .find(|&u| bg[u].a == arr.suffix_a[t + 1])
                        .unwrap();
                    x[bg[lone].project] = 1;
                }
                None => {
                    for p in &bg[..=t] {
                        x[p.project] = 2;
                    }
                    let back = (0..=t).find(|&u| bg[u].b == arr.prefix_b[t]).unwrap();
                    x[bg[back].project] = 1;
                }
            }
        }
        Some(Profile(x))
    }
}
