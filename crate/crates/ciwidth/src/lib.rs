//! Monte Carlo verification, reference tables and the `ciwidth` command line
//! on top of [`ciwidth_core`].
//!
//! * [`mc`] simulates the coverage of an interval and the probability that it
//!   is narrower than the target width.
//! * [`report`] sizes a grid of designs, simulates both sample sizes and
//!   writes CSV and Markdown tables.
//! * [`cli`] is the command line front end.

pub mod cli;
mod error;
pub mod mc;
pub mod report;

pub use ciwidth_core;
pub use error::{Error, Result};
