//! Instances, profiles and revenue curves shared by every solver.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single problem instance: `n` projects, per-project cap `m`, and a
/// revenue table with `R[j][0] = 0`.
///
/// Rows are stored flat with stride `m + 1`. Instances are immutable once
/// validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    table: Vec<i64>,
}

/// Unvalidated on-disk form of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "R")]
    pub revenue: Vec<Vec<i64>>,
}

/// One broken instance invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyInstance,
    ZeroCap,
    RowCount {
        expected: usize,
        found: usize,
    },
    ShapeMismatch {
        project: usize,
        expected: usize,
        found: usize,
    },
    NonZeroBase {
        project: usize,
        value: i64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyInstance => write!(f, "instance has no projects"),
            Violation::ZeroCap => write!(f, "effort cap m must be at least 1"),
            Violation::RowCount { expected, found } => {
                write!(f, "expected {expected} revenue rows, found {found}")
            }
            Violation::ShapeMismatch {
                project,
                expected,
                found,
            } => write!(f, "row {project} has {found} entries, expected {expected}"),
            Violation::NonZeroBase { project, value } => {
                write!(f, "row {project} has R(0) = {value}, expected 0")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid instance: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("profile has {found} entries but instance has {expected} projects")]
    LengthMismatch { expected: usize, found: usize },
    #[error("profile entry {project} = {value} is outside 0..={cap}")]
    OutOfRange {
        project: usize,
        value: u32,
        cap: usize,
    },
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl ModelError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ModelError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// Checks every instance invariant and reports all of the violations at once.
pub fn validate_instance(raw: RawInstance) -> Result<Instance, ModelError> {
    let mut violations = Vec::new();
    if raw.n == 0 || raw.revenue.is_empty() {
        violations.push(Violation::EmptyInstance);
    }
    if raw.m == 0 {
        violations.push(Violation::ZeroCap);
    }
    if raw.revenue.len() != raw.n {
        violations.push(Violation::RowCount {
            expected: raw.n,
            found: raw.revenue.len(),
        });
    }
    let width = raw.m + 1;
    for (project, row) in raw.revenue.iter().enumerate() {
        if row.len() != width {
            violations.push(Violation::ShapeMismatch {
                project,
                expected: width,
                found: row.len(),
            });
        }
        if let Some(&base) = row.first() {
            if base != 0 {
                violations.push(Violation::NonZeroBase {
                    project,
                    value: base,
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }
    let table = raw.revenue.into_iter().flatten().collect();
    Ok(Instance {
        n: raw.n,
        m: raw.m,
        table,
    })
}

impl Instance {
    /// Builds an instance from per-project rows, inferring `n` and `m`.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, ModelError> {
        let m = rows.first().map_or(0, |r| r.len().saturating_sub(1));
        validate_instance(RawInstance {
            n: rows.len(),
            m,
            revenue: rows,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceFileError> {
        let raw: RawInstance = serde_json::from_str(text)?;
        Ok(validate_instance(raw)?)
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            n: self.n,
            m: self.m,
            revenue: self.rows().map(<[i64]>::to_vec).collect(),
        }
    }

    /// Compact single-line JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&self.to_raw()).expect("instance serializes");
        s.push('\n');
        s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Largest feasible total effort, `n * m`.
    #[inline]
    pub fn max_effort(&self) -> usize {
        self.n * self.m
    }

    /// Revenue of project `j` when given `x` efforts.
    #[inline]
    pub fn revenue(&self, j: usize, x: usize) -> i64 {
        debug_assert!(x <= self.m);
        self.table[j * (self.m + 1) + x]
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[i64] {
        let w = self.m + 1;
        &self.table[j * w..(j + 1) * w]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.table.chunks_exact(self.m + 1)
    }
}

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Effort vector `(x_1, ..., x_n)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<u32>);

impl Profile {
    pub fn zeros(n: usize) -> Self {
        Profile(vec![0; n])
    }

    /// Total effort, `sum(x_j)`.
    pub fn effort(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Profile {
    /// Space-separated entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Exact total revenue `sum_j R_j(x_j)`.
pub fn profile_revenue(inst: &Instance, p: &Profile) -> Result<i64, ModelError> {
    if p.len() != inst.n() {
        return Err(ModelError::LengthMismatch {
            expected: inst.n(),
            found: p.len(),
        });
    }
    let mut total = 0i64;
    for (j, &x) in p.0.iter().enumerate() {
        if x as usize > inst.m() {
            return Err(ModelError::OutOfRange {
                project: j,
                value: x,
                cap: inst.m(),
            });
        }
        total += inst.revenue(j, x as usize);
    }
    Ok(total)
}

/// Best revenue per total effort, indexed `0..len`. Indices past the end are
/// outside the curve's scope and read back as `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RevenueCurve(pub Vec<i64>);

impl RevenueCurve {
    pub fn get(&self, k: usize) -> Option<i64> {
        self.0.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// First index where the two curves disagree, including a length difference.
    pub fn first_mismatch(&self, other: &RevenueCurve) -> Option<usize> {
        let common = self.len().min(other.len());
        (0..common)
            .find(|&k| self.0[k] != other.0[k])
            .or_else(|| (self.len() != other.len()).then_some(common))
    }
}

impl From<Vec<i64>> for RevenueCurve {
    fn from(v: Vec<i64>) -> Self {
        RevenueCurve(v)
    }
}
