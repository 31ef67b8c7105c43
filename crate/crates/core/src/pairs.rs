//! Multisets over `{1..m}`, reducibility, and the irreducible unit-gap pairs
//! that make up the greedy's move vocabulary.
//!
//! A pair `(A, B)` is reducible when some nonempty sub-multiset of `A` has the
//! same sum as some nonempty sub-multiset of `B`. Once both sums reach `m^2`
//! the pair is always reducible, so every irreducible pair with
//! `sum(A) = sum(B) + 1` has `sum(B) < m^2` and the enumeration is finite.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::Profile;

/// Largest `m` enumerated by default.
pub const DEFAULT_MAX_M: usize = 6;

/// `m^2`: a pair whose two sums both reach this bound is reducible.
pub fn reducibility_bound(m: usize) -> usize {
    m * m
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairsError {
    #[error("m = {m} exceeds the enumeration cap of {cap}")]
    MTooLarge { m: usize, cap: usize },
    #[error("m must be at least 1")]
    ZeroM,
}

/// Multiset over `{1..m}` stored as multiplicities; `counts[d - 1]` is the
/// multiplicity of `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset {
    counts: Vec<u32>,
}

impl Multiset {
    pub fn empty(m: usize) -> Self {
        Multiset { counts: vec![0; m] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Multiset { counts }
    }

    /// Panics if some element lies outside `1..=m`.
    pub fn from_elements(m: usize, elems: &[usize]) -> Self {
        let mut counts = vec![0; m];
        for &e in elems {
            assert!((1..=m).contains(&e), "element {e} outside 1..={m}");
            counts[e - 1] += 1;
        }
        Multiset { counts }
    }

    /// Universe size `m`.
    pub fn universe(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Multiplicity of value `d` (1-based).
    pub fn multiplicity(&self, d: usize) -> u32 {
        self.counts[d - 1]
    }

    pub fn sum(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 1) * c as usize)
            .sum()
    }

    /// Number of elements, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Elements in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c as usize))
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Bitset of reachable subset sums, bit 0 (the empty subset) included.
fn subset_sum_bits(ms: &Multiset) -> Vec<u64> {
    let total = ms.sum();
    let mut bits = vec![0u64; total / 64 + 1];
    bits[0] = 1;
    for e in ms.elements() {
        shift_or(&mut bits, e);
    }
    bits
}

// bits |= bits << by
fn shift_or(bits: &mut [u64], by: usize) {
    let (words, rem) = (by / 64, by % 64);
    for i in (0..bits.len()).rev() {
        let mut v = 0u64;
        if i >= words {
            v = bits[i - words] << rem;
            if rem > 0 && i > words {
                v |= bits[i - words - 1] >> (64 - rem);
            }
        }
        bits[i] |= v;
    }
}

/// Every sum attained by a nonempty sub-multiset.
pub fn nonempty_subset_sums(ms: &Multiset) -> BTreeSet<usize> {
    // Elements are positive, so only the empty subset reaches 0.
    let bits = subset_sum_bits(ms);
    (1..=ms.sum())
        .filter(|&s| bits[s / 64] >> (s % 64) & 1 == 1)
        .collect()
}

pub fn is_reducible(a: &Multiset, b: &Multiset) -> bool {
    if a.counts
        .iter()
        .zip(&b.counts)
        .any(|(&x, &y)| x > 0 && y > 0)
    {
        return true;
    }
    let (sa, sb) = (subset_sum_bits(a), subset_sum_bits(b));
    let mut common = sa.iter().zip(&sb).map(|(x, y)| x & y);
    // drop the shared empty-subset bit
    let first = common.next().unwrap_or(0) & !1;
    first != 0 || common.any(|w| w != 0)
}

/// Irreducible pair with `sum(A) - sum(B) = 1`: raise projects by the
/// elements of `A`, lower projects by the elements of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitGapPair {
    pub a: Multiset,
    pub b: Multiset,
}

impl UnitGapPair {
    /// Multiplicity of `d` in `A`.
    pub fn a_mult(&self, d: usize) -> usize {
        self.a.multiplicity(d) as usize
    }

    /// Multiplicity of `d` in `B`.
    pub fn b_mult(&self, d: usize) -> usize {
        self.b.multiplicity(d) as usize
    }

    /// Number of projects a move of this shape touches.
    pub fn touched(&self) -> usize {
        self.a.len() + self.b.len()
    }
}

impl fmt::Display for UnitGapPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A={} B={}", self.a, self.b)
    }
}

/// All multisets over `{1..m}` with the given sum, lexicographic by counts.
pub fn multisets_with_sum(m: usize, sum: usize) -> Vec<Multiset> {
    fn go(d: usize, m: usize, left: usize, counts: &mut Vec<u32>, out: &mut Vec<Multiset>) {
        if d > m {
            if left == 0 {
                out.push(Multiset {
                    counts: counts.clone(),
                });
            }
            return;
        }
        for c in 0..=left / d {
            counts[d - 1] = c as u32;
            go(d + 1, m, left - c * d, counts, out);
        }
        counts[d - 1] = 0;
    }
    let mut out = Vec::new();
    go(1, m, sum, &mut vec![0; m], &mut out);
    out
}

/// [`enumerate_unit_gap_irreducible_capped`] with the default cap.
pub fn enumerate_unit_gap_irreducible(m: usize) -> Result<Vec<UnitGapPair>, PairsError> {
    enumerate_unit_gap_irreducible_capped(m, DEFAULT_MAX_M)
}

/// Every irreducible `(A, B)` with `sum(A) = sum(B) + 1`, ordered by
/// `sum(B)`, then by the counts of `B`, then by the counts of `A`.
pub fn enumerate_unit_gap_irreducible_capped(
    m: usize,
    max_m: usize,
) -> Result<Vec<UnitGapPair>, PairsError> {
    if m == 0 {
        return Err(PairsError::ZeroM);
    }
    if m > max_m {
        return Err(PairsError::MTooLarge { m, cap: max_m });
    }
    let bound = reducibility_bound(m);
    let by_sum: Vec<Vec<Multiset>> = (0..=bound).map(|s| multisets_with_sum(m, s)).collect();
    let mut out = Vec::new();
    for sb in 0..bound {
        for b in &by_sum[sb] {
            for a in &by_sum[sb + 1] {
                if !is_reducible(a, b) {
                    out.push(UnitGapPair {
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `diff(x, y)`: positive increases form `A`, positive decreases form `B`.
///
/// Panics if the profiles differ in length or some change exceeds `m`.
pub fn profile_diff(m: usize, x: &Profile, y: &Profile) -> (Multiset, Multiset) {
    assert_eq!(x.len(), y.len(), "profiles differ in length");
    let mut a = Multiset::empty(m);
    let mut b = Multiset::empty(m);
    for (&xi, &yi) in x.as_slice().iter().zip(y.as_slice()) {
        if yi > xi {
            a.counts[(yi - xi) as usize - 1] += 1;
        } else if xi > yi {
            b.counts[(xi - yi) as usize - 1] += 1;
        }
    }
    (a, b)
}
