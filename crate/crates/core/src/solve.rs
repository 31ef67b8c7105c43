//! Algorithm selection and a uniform entry point over every solver.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::convex::{self, ConvexError};
use crate::dp;
use crate::greedy::{self, GreedyError};
use crate::maxplus::{self, MaxPlusError};
use crate::model::{Instance, Profile, RevenueCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dp,
    Greedy,
    Convex,
    M2,
    /// `M2` when `m = 2`, else `Convex` when every row is convex, else `Greedy`.
    Auto,
}

impl Algorithm {
    pub const CONCRETE: [Algorithm; 4] = [
        Algorithm::Dp,
        Algorithm::Greedy,
        Algorithm::Convex,
        Algorithm::M2,
    ];

    pub fn resolve(self, inst: &Instance) -> Algorithm {
        match self {
            Algorithm::Auto if inst.m() == 2 => Algorithm::M2,
            Algorithm::Auto if convex::is_convex(inst) => Algorithm::Convex,
            Algorithm::Auto => Algorithm::Greedy,
            a => a,
        }
    }

    /// Whether the solver's preconditions hold for `inst`.
    pub fn applies_to(self, inst: &Instance) -> bool {
        match self {
            Algorithm::Convex => convex::is_convex(inst),
            Algorithm::M2 => inst.m() == 2,
            _ => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::Greedy => "greedy",
            Algorithm::Convex => "convex",
            Algorithm::M2 => "m2",
            Algorithm::Auto => "auto",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dp" => Ok(Algorithm::Dp),
            "greedy" => Ok(Algorithm::Greedy),
            "convex" => Ok(Algorithm::Convex),
            "m2" => Ok(Algorithm::M2),
            "auto" => Ok(Algorithm::Auto),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Greedy(#[from] GreedyError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    MaxPlus(#[from] MaxPlusError),
    #[error("k = {k} is outside 0..={max}")]
    KOutOfRange { k: usize, max: usize },
}

pub fn solve_curve(inst: &Instance, algo: Algorithm) -> Result<RevenueCurve, SolveError> {
    Ok(match algo.resolve(inst) {
        Algorithm::Dp => dp::dp_all_k(inst),
        Algorithm::Greedy => greedy::solve_all_k(inst)?,
        Algorithm::Convex => convex::convex_all_k(inst)?,
        Algorithm::M2 => maxplus::solve_all_k_m2(inst)?,
        Algorithm::Auto => unreachable!(),
    })
}

/// Curve plus one optimal profile per `k`.
pub fn solve_curve_with_profiles(
    inst: &Instance,
    algo: Algorithm,
) -> Result<(RevenueCurve, Vec<Profile>), SolveError> {
    let ks = 0..=inst.max_effort();
    Ok(match algo.resolve(inst) {
        Algorithm::Dp => dp::dp_all_k_with_profiles(inst),
        Algorithm::Greedy => greedy::solve_all_k_with_profiles(inst)?,
        Algorithm::Convex => {
            let curve = convex::convex_all_k(inst)?;
            let profiles = ks
                .map(|k| convex::convex_witness(inst, k))
                .collect::<Result<_, _>>()?;
            (curve, profiles)
        }
        Algorithm::M2 => {
            let sol = maxplus::solve_m2_detailed(inst)?;
            let profiles = ks.map(|k| sol.profile(inst.n(), k).unwrap()).collect();
            (sol.conv.h, profiles)
        }
        Algorithm::Auto => unreachable!(),
    })
}

/// Optimal revenue at one `k`, with a profile when one is requested.
pub fn solve_at(
    inst: &Instance,
    algo: Algorithm,
    k: usize,
    want_profile: bool,
) -> Result<(i64, Option<Profile>), SolveError> {
    let max = inst.max_effort();
    if k > max {
        return Err(SolveError::KOutOfRange { k, max });
    }
    Ok(match algo.resolve(inst) {
        Algorithm::Dp if want_profile => {
            let t = dp::DpTable::build(inst);
            (t.value(inst.n(), k).unwrap(), t.profile(k))
        }
        Algorithm::Dp => (dp::dp_all_k(inst).values()[k], None),
        Algorithm::Greedy => {
            let (rev, p) = greedy::solve_k(inst, k)?;
            (rev, want_profile.then_some(p))
        }
        Algorithm::Convex => {
            let rev = convex::convex_single_k(inst, k)?;
            let p = if want_profile {
                Some(convex::convex_witness(inst, k)?)
            } else {
                None
            };
            (rev, p)
        }
        Algorithm::M2 => {
            let sol = maxplus::solve_m2_detailed(inst)?;
            (
                sol.conv.h.values()[k],
                if want_profile {
                    sol.profile(inst.n(), k)
                } else {
                    None
                },
            )
        }
        Algorithm::Auto => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::profile_revenue;

    #[test]
    fn auto_selection() {
        let m2 = Instance::from_rows(vec![vec![0, 1, 10]]).unwrap();
        let convex = Instance::from_rows(vec![vec![0, 1, 3, 10]]).unwrap();
        let general = Instance::from_rows(vec![vec![0, 5, 6, 7]]).unwrap();
        assert_eq!(Algorithm::Auto.resolve(&m2), Algorithm::M2);
        assert_eq!(Algorithm::Auto.resolve(&convex), Algorithm::Convex);
        assert_eq!(Algorithm::Auto.resolve(&general), Algorithm::Greedy);
        assert_eq!(Algorithm::Dp.resolve(&m2), Algorithm::Dp);
    }

    #[test]
    fn all_algorithms_agree_with_profiles() {
        let inst = Instance::from_rows(vec![vec![0, 1, 10], vec![0, 2, 6], vec![0, 0, 4]]).unwrap();
        let reference = solve_curve(&inst, Algorithm::Dp).unwrap();
        for algo in Algorithm::CONCRETE {
            let (curve, profiles) = solve_curve_with_profiles(&inst, algo).unwrap();
            assert_eq!(curve, reference, "{algo}");
            for (k, p) in profiles.iter().enumerate() {
                assert_eq!(profile_revenue(&inst, p).unwrap(), curve.values()[k]);
                let (rev, single) = solve_at(&inst, algo, k, true).unwrap();
                assert_eq!(rev, curve.values()[k]);
                assert_eq!(profile_revenue(&inst, &single.unwrap()).unwrap(), rev);
            }
        }
        assert!(solve_at(&inst, Algorithm::Auto, 7, false).is_err());
    }

    #[test]
    fn precondition_errors() {
        let inst = Instance::from_rows(vec![vec![0, 5, 6, 7]]).unwrap();
        assert!(matches!(
            solve_curve(&inst, Algorithm::Convex),
            Err(SolveError::Convex(_))
        ));
        assert!(matches!(
            solve_curve(&inst, Algorithm::M2),
            Err(SolveError::MaxPlus(_))
        ));
        assert_eq!(solve_at(&inst, Algorithm::Auto, 0, false).unwrap().0, 0);
    }
}
