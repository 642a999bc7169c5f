//! Integer search for the smallest sample size whose interval width fits.
//!
//! The search climbs from `start` in coarse `jump`s until the fit test
//! passes, moves `headroom` further up, then walks down in `step`s while the
//! test keeps passing. It returns the lowest size of that contiguous fitting
//! run.
//!
//! `headroom` matters for widths built from discrete quantiles: such widths
//! are sawtooth functions of `N` and can dip below the target, rise above it
//! again and only then settle. Starting the descent far enough above the first
//! hit (and climbing again whenever that point does not fit) lands on the final
//! crossing instead of an early dip.

use crate::error::{Error, Result};

/// Upper bound on fit evaluations in one search.
pub const MAX_EVALUATIONS: u64 = 50_000_000;

/// Parameters of the coarse-then-fine search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchPolicy {
    /// Initial size. The first evaluation happens at `start + jump`.
    pub start: u64,
    /// Coarse increment while the fit test fails.
    pub jump: u64,
    /// Fine decrement while the fit test passes.
    pub step: u64,
    /// Minimum distance past the first hit at which the descent begins.
    pub headroom: u64,
}

impl SearchPolicy {
    pub fn new(start: u64, jump: u64, step: u64) -> Result<Self> {
        Self::with_headroom(start, jump, step, 0)
    }

    pub fn with_headroom(start: u64, jump: u64, step: u64, headroom: u64) -> Result<Self> {
        let policy = SearchPolicy { start, jump, step, headroom };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if self.start < 1 {
            return Err(Error::Domain("search start must be >= 1"));
        }
        if self.step < 1 || self.jump < self.step {
            return Err(Error::Domain("search policy requires jump >= step >= 1"));
        }
        Ok(())
    }

    /// `jump = max(1, ceil(start / 10))`, `step = 1`, no headroom.
    pub fn from_start(start: u64) -> Self {
        let start = start.max(1);
        SearchPolicy { start, jump: start.div_ceil(10).max(1), step: 1, headroom: 0 }
    }

    /// Same policy starting the descent at least `headroom` past the first hit.
    pub fn headroom(self, headroom: u64) -> Self {
        SearchPolicy { headroom, ..self }
    }
}

struct Counter {
    used: u64,
}

impl Counter {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > MAX_EVALUATIONS {
            Err(Error::SearchExhausted { evaluations: self.used - 1 })
        } else {
            Ok(())
        }
    }
}

fn advance(n: u64, by: u64, evaluations: u64) -> Result<u64> {
    n.checked_add(by).ok_or(Error::SearchExhausted { evaluations })
}

/// Lowest size of the fitting run found by the coarse-then-fine pattern.
///
/// `fits(n)` must eventually return `true` for all large `n`. The result is
/// at least 1; sizes below 1 are never evaluated.
pub fn search_min_n<F>(mut fits: F, policy: &SearchPolicy) -> Result<u64>
where
    F: FnMut(u64) -> Result<bool>,
{
    policy.validate()?;
    let mut counter = Counter { used: 0 };
    let mut eval = |n: u64, counter: &mut Counter| -> Result<bool> {
        counter.tick()?;
        fits(n)
    };

    let mut s = policy.start;
    loop {
        s = advance(s, policy.jump, counter.used)?;
        if eval(s, &mut counter)? {
            break;
        }
    }

    if policy.headroom > 0 {
        s = advance(s, policy.headroom, counter.used)?;
        while !eval(s, &mut counter)? {
            loop {
                s = advance(s, policy.jump, counter.used)?;
                if eval(s, &mut counter)? {
                    break;
                }
            }
            s = advance(s, policy.headroom, counter.used)?;
        }
    }

    while s > policy.step && eval(s - policy.step, &mut counter)? {
        s -= policy.step;
    }
    Ok(s)
}

/// Lowest `N` of the final run with `width(N) <= d0`.
pub fn find_exact_n<W>(mut width: W, d0: f64, policy: &SearchPolicy) -> Result<u64>
where
    W: FnMut(u64) -> Result<f64>,
{
    if !(d0 > 0.0) || d0.is_infinite() {
        return Err(Error::Domain("target width must be finite and > 0"));
    }
    search_min_n(|n| Ok(width(n)? <= d0), policy)
}
