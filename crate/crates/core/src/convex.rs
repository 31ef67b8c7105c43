//! Fast paths when every revenue row is convex.
//!
//! With convex rows some optimal `k`-profile fills `q = k / m` projects
//! completely and puts the remaining `c = k mod m` efforts on one more
//! project. Sorting by `R_j(m)` descending, the best such profile is either
//!
//! * `Ans1`: the top `q + 1` projects full except the one with the smallest
//!   `r_j = R_j(m) - R_j(c)`, which gets `c`; or
//! * `Ans2`: the top `q` projects full, plus the best `R_j(c)` among the rest.

use std::cmp::Reverse;

use thiserror::Error;

use crate::exec::Execution;
use crate::model::{Instance, Profile, RevenueCurve};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvexError {
    #[error("row {project} is not convex at x = {x}")]
    NotConvex { project: usize, x: usize },
    #[error("k = {k} is outside 0..={max}")]
    KOutOfRange { k: usize, max: usize },
}

fn first_concave_point(inst: &Instance) -> Option<(usize, usize)> {
    inst.rows().enumerate().find_map(|(j, r)| {
        (1..inst.m())
            .find(|&x| r[x + 1] - r[x] < r[x] - r[x - 1])
            .map(|x| (j, x))
    })
}

/// True iff every row has non-decreasing increments.
pub fn is_convex(inst: &Instance) -> bool {
    first_concave_point(inst).is_none()
}

fn require_convex(inst: &Instance) -> Result<(), ConvexError> {
    match first_concave_point(inst) {
        Some((project, x)) => Err(ConvexError::NotConvex { project, x }),
        None => Ok(()),
    }
}

/// Projects sorted by `R_j(m)` descending (ties by index) and the prefix
/// sums of those full revenues.
#[derive(Clone, Debug)]
pub struct ConvexOrder {
    pub order: Vec<usize>,
    /// `prefix[t]` = sum of the first `t` sorted `R_j(m)`.
    pub prefix: Vec<i64>,
}

/// Per-residue arrays over the sorted order.
#[derive(Clone, Debug)]
pub struct ResidueArrays {
    /// `r[t] = R(m) - R(c)` of the `t`-th sorted project.
    pub r: Vec<i64>,
    /// `prefix_min[t] = min(r[0..=t])`.
    pub prefix_min: Vec<i64>,
    /// `suffix_max[t] = max R(c)` over sorted positions `t..n`.
    pub suffix_max: Vec<i64>,
}

impl ConvexOrder {
    pub fn new(inst: &Instance) -> Self {
        let m = inst.m();
        let mut order: Vec<usize> = (0..inst.n()).collect();
        order.sort_by_key(|&j| (Reverse(inst.revenue(j, m)), j));
        let mut prefix = Vec::with_capacity(order.len() + 1);
        prefix.push(0);
        for &j in &order {
            prefix.push(prefix.last().unwrap() + inst.revenue(j, m));
        }
        ConvexOrder { order, prefix }
    }

    pub fn residue(&self, inst: &Instance, c: usize) -> ResidueArrays {
        let m = inst.m();
        let r: Vec<i64> = self
            .order
            .iter()
            .map(|&j| inst.revenue(j, m) - inst.revenue(j, c))
            .collect();
        let mut prefix_min = r.clone();
        for t in 1..prefix_min.len() {
            prefix_min[t] = prefix_min[t].min(prefix_min[t - 1]);
        }
        let mut suffix_max: Vec<i64> = self.order.iter().map(|&j| inst.revenue(j, c)).collect();
        for t in (0..suffix_max.len().saturating_sub(1)).rev() {
            suffix_max[t] = suffix_max[t].max(suffix_max[t + 1]);
        }
        ResidueArrays {
            r,
            prefix_min,
            suffix_max,
        }
    }
}

/// `(Ans1, Ans2)` for `k = q*m + c` with `0 < c < m`; `Ans2` is absent when
/// every project is among the top `q + 1`.
fn residue_answers(ord: &ConvexOrder, arrays: &ResidueArrays, q: usize) -> (i64, Option<i64>) {
    let ans1 = ord.prefix[q + 1] - arrays.prefix_min[q];
    let ans2 = arrays
        .suffix_max
        .get(q + 1)
        .map(|&best| ord.prefix[q] + best);
    (ans1, ans2)
}

/// Optimal revenue for every `k`, `O(nm)` after one sort.
pub fn convex_all_k(inst: &Instance) -> Result<RevenueCurve, ConvexError> {
    convex_all_k_with(inst, Execution::default())
}

pub fn convex_all_k_with(inst: &Instance, exec: Execution) -> Result<RevenueCurve, ConvexError> {
    require_convex(inst)?;
    let (n, m) = (inst.n(), inst.m());
    let ord = ConvexOrder::new(inst);
    let mut curve = vec![0i64; n * m + 1];
    for q in 0..=n {
        curve[q * m] = ord.prefix[q];
    }
    // residue classes are independent
    let per_residue = exec.map_range(m.saturating_sub(1), |ci| {
        let arrays = ord.residue(inst, ci + 1);
        (0..n)
            .map(|q| {
                let (a1, a2) = residue_answers(&ord, &arrays, q);
                a2.map_or(a1, |a2| a1.max(a2))
            })
            .collect::<Vec<_>>()
    });
    for (ci, values) in per_residue.into_iter().enumerate() {
        for (q, v) in values.into_iter().enumerate() {
            curve[q * m + ci + 1] = v;
        }
    }
    Ok(RevenueCurve(curve))
}

/// An optimal `k`-profile with at most one project strictly between 0 and `m`.
pub fn convex_witness(inst: &Instance, k: usize) -> Result<Profile, ConvexError> {
    require_convex(inst)?;
    let (n, m) = (inst.n(), inst.m());
    if k > n * m {
        return Err(ConvexError::KOutOfRange { k, max: n * m });
    }
    let ord = ConvexOrder::new(inst);
    let (q, c) = (k / m, k % m);
    let mut x = vec![0u32; n];
    if c == 0 {
        for &j in &ord.order[..q] {
            x[j] = m as u32;
        }
        return Ok(Profile(x));
    }
    let arrays = ord.residue(inst, c);
    let (a1, a2) = residue_answers(&ord, &arrays, q);
    if a2.is_some_and(|a2| a2 > a1) {
        let best = arrays.suffix_max[q + 1];
        let t = (q + 1..n)
            .find(|&t| inst.revenue(ord.order[t], c) == best)
            .unwrap();
        for &j in &ord.order[..q] {
            x[j] = m as u32;
        }
        x[ord.order[t]] = c as u32;
    } else {
        let t = (0..=q)
            .find(|&t| arrays.r[t] == arrays.prefix_min[q])
            .unwrap();
        for &j in &ord.order[..=q] {
            x[j] = m as u32;
        }
        x[ord.order[t]] = c as u32;
    }
    Ok(Profile(x))
}

/// Result of [`select_kth_largest`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    /// The `K`-th largest value.
    pub threshold: i64,
    /// Positions of the `K` largest values (ties broken by position).
    pub top: Vec<usize>,
    /// All other positions.
    pub rest: Vec<usize>,
}

/// Splits positions into the `K` largest values and the rest in linear time.
pub fn select_kth_largest(values: &[i64], k: usize) -> Result<Selection, ConvexError> {
    if k == 0 || k > values.len() {
        return Err(ConvexError::KOutOfRange {
            k,
            max: values.len(),
        });
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.select_nth_unstable_by_key(k - 1, |&i| (Reverse(values[i]), i));
    let rest = idx.split_off(k);
    Ok(Selection {
        threshold: values[idx[k - 1]],
        top: idx,
        rest,
    })
}

/// Optimal revenue for a single `k` in `O(nm)` without sorting.
pub fn convex_single_k(inst: &Instance, k: usize) -> Result<i64, ConvexError> {
    require_convex(inst)?;
    let (n, m) = (inst.n(), inst.m());
    if k > n * m {
        return Err(ConvexError::KOutOfRange { k, max: n * m });
    }
    let (q, c) = (k / m, k % m);
    if k == 0 {
        return Ok(0);
    }
    let full: Vec<i64> = (0..n).map(|j| inst.revenue(j, m)).collect();
    if c == 0 {
        let sel = select_kth_largest(&full, q)?;
        return Ok(sel.top.iter().map(|&j| full[j]).sum());
    }
    let sel = select_kth_largest(&full, q + 1)?;
    let top_sum: i64 = sel.top.iter().map(|&j| full[j]).sum();
    let min_r = sel
        .top
        .iter()
        .map(|&j| full[j] - inst.revenue(j, c))
        .min()
        .unwrap();
    let ans1 = top_sum - min_r;
    // top q = top q+1 minus its smallest full revenue
    let ans2 = sel
        .rest
        .iter()
        .map(|&j| inst.revenue(j, c))
        .max()
        .map(|best| top_sum - sel.threshold + best);
    Ok(ans2.map_or(ans1, |a2| ans1.max(a2)))
}
