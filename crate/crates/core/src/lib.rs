//! Sample sizes for confidence intervals of a guaranteed width.
//!
//! The usual "plug-in" sample size makes the *expected* confidence interval as
//! narrow as required. The interval a study actually reports is built from
//! sample estimates, so its width is random and exceeds the target about half
//! of the time. This crate computes the smallest sample size for which the
//! empirical `1 - alpha` interval is no wider than `d0` with probability at
//! least `psi0`, for three families:
//!
//! * Normal mean, Student-t interval ([`sizing::n_exact_normal`]),
//! * Poisson rate, Garwood interval ([`sizing::n_exact_poisson`]),
//! * Binomial proportion, Wilson interval ([`sizing::n_exact_binomial`]).
//!
//! Everything here is pure numerics with no allocation, so the crate is
//! `no_std`. Simulation, report tables and the command line live in the
//! `ciwidth` crate.
//!
//! ```
//! use ciwidth_core::sizing::{n_expected_normal, n_exact_normal};
//!
//! // sigma = 1, full width 0.5, 95% interval, width reached with probability 0.8
//! assert_eq!(n_expected_normal(1.0, 0.5, 0.05).unwrap(), 62);
//! assert_eq!(n_exact_normal(1.0, 0.5, 0.05, 0.8).unwrap(), 73);
//! ```
#![cfg_attr(not(test), no_std)]

pub mod dist;
mod error;
pub mod interval;
mod math;
pub mod search;
pub mod sizing;
pub mod special;
mod types;

pub use error::{Error, Result};
pub use interval::Interval;
pub use search::SearchPolicy;
pub use sizing::{DesignSpec, Family, SizingResult};
pub use types::{DegreesOfFreedom, Probability};
