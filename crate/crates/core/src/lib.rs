//! Exact solvers for splitting an integer effort budget across projects with
//! arbitrary per-project revenue tables.
//!
//! The dynamic program in [`dp`] is the reference. [`greedy`] reaches every
//! budget in turn through small exchanges, [`convex`] handles convex
//! tables in near-linear time and [`maxplus`] covers the two-level case through
//! a (max,+) convolution.

pub mod convex;
pub mod dp;
pub mod exec;
pub mod gen;
pub mod greedy;
pub mod heap;
pub mod maxplus;
pub mod model;
pub mod pairs;
pub mod solve;
pub mod verify;

pub use exec::Execution;
pub use model::{Instance, ModelError, Profile, RevenueCurve};
pub use solve::{solve_at, solve_curve, Algorithm, SolveError};
