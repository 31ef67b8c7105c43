//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::Instance;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Family {
    /// `R_j(x)` uniform in the range for every `x >= 1`.
    #[default]
    Uniform,
    /// Increments drawn from the range and sorted ascending.
    Convex,
    /// Uniform with `m` fixed to 2.
    M2,
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Family::Uniform),
            "convex" => Ok(Family::Convex),
            "m2" => Ok(Family::M2),
            other => Err(GenError::BadParams(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Uniform => "uniform",
            Family::Convex => "convex",
            Family::M2 => "m2",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

pub const DEFAULT_RANGE: (i64, i64) = (-100, 100);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Inclusive value range.
    pub range: (i64, i64),
    pub family: Family,
}

impl GenParams {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        GenParams {
            n,
            m,
            seed,
            range: DEFAULT_RANGE,
            family: Family::Uniform,
        }
    }

    pub fn family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn range(mut self, lo: i64, hi: i64) -> Self {
        self.range = (lo, hi);
        self
    }
}

/// Same parameters always give the same instance, on every platform.
pub fn generate(p: &GenParams) -> Result<Instance, GenError> {
    let (lo, hi) = p.range;
    if p.n == 0 || p.m == 0 {
        return Err(GenError::BadParams("n and m must be at least 1".into()));
    }
    if lo > hi {
        return Err(GenError::BadParams(format!("empty range {lo}..={hi}")));
    }
    if p.family == Family::M2 && p.m != 2 {
        return Err(GenError::BadParams(format!(
            "family m2 needs m = 2, got {}",
            p.m
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let rows = (0..p.n)
        .map(|_| {
            let mut row = Vec::with_capacity(p.m + 1);
            row.push(0);
            match p.family {
                Family::Uniform | Family::M2 => {
                    row.extend((0..p.m).map(|_| rng.random_range(lo..=hi)));
                }
                Family::Convex => {
                    let mut inc: Vec<i64> = (0..p.m).map(|_| rng.random_range(lo..=hi)).collect();
                    inc.sort_unstable();
                    let mut acc = 0;
                    for d in inc {
                        acc += d;
                        row.push(acc);
                    }
                }
            }
            row
        })
        .collect();
    Ok(Instance::from_rows(rows).expect("generated rows are valid"))
}
