//! Seeded Monte Carlo estimates of coverage and of `P(width < d0)`.
//!
//! Replications are split into blocks of [`BLOCK`]. Block `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so every replication's
//! random numbers depend only on the seed and its index, never on the number
//! of worker threads.

use std::collections::HashMap;

use ciwidth_core::dist::student_t_quantile;
use ciwidth_core::interval::{garwood_interval, wilson_interval};
use ciwidth_core::{DesignSpec, Family};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, ChiSquared, Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Replications per random-number substream.
pub const BLOCK: u64 = 1024;

/// Largest Poisson mean accepted by the sampler.
pub const MAX_POISSON_MEAN: f64 = 1e15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub nsim: u64,
    pub seed: u64,
    pub spec: DesignSpec,
    /// Sample size under test.
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// Fraction of intervals containing the true parameter.
    pub coverage: f64,
    /// Fraction of intervals narrower than `d0`.
    pub power: f64,
    pub nsim: u64,
    pub seed: u64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    covered: u64,
    narrow: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, other: Tally) -> Tally {
        Tally { covered: self.covered + other.covered, narrow: self.narrow + other.narrow }
    }
}

fn run_blocks<F>(cfg: &SimConfig, block: F) -> SimReport
where
    F: Fn(&mut ChaCha8Rng, u64) -> Tally + Sync,
{
    let blocks = cfg.nsim.div_ceil(BLOCK);
    let tally = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b);
            let reps = BLOCK.min(cfg.nsim - b * BLOCK);
            block(&mut rng, reps)
        })
        .reduce(Tally::default, |a, b| a + b);
    let n = cfg.nsim as f64;
    SimReport { coverage: tally.covered as f64 / n, power: tally.narrow as f64 / n, nsim: cfg.nsim, seed: cfg.seed }
}

fn check(cfg: &SimConfig, min_n: u64) -> Result<()> {
    let mut spec = cfg.spec;
    // sizing needs sigma > 0, but a zero-variance simulation is well defined
    if spec.family == (Family::Normal { sigma: 0.0 }) {
        spec.family = Family::Normal { sigma: 1.0 };
    }
    spec.validate()?;
    if cfg.nsim == 0 {
        return Err(Error::Config("nsim must be >= 1".into()));
    }
    if cfg.n < min_n {
        return Err(Error::Config(format!("sample size must be >= {min_n}")));
    }
    Ok(())
}

/// Runs the simulation matching `cfg.spec.family`.
pub fn simulate(cfg: &SimConfig) -> Result<SimReport> {
    match cfg.spec.family {
        Family::Normal { .. } => simulate_normal(cfg),
        Family::Poisson { .. } => simulate_poisson(cfg),
        Family::Binomial { .. } => simulate_binomial(cfg),
    }
}

/// Normal mean with true value 0.
///
/// Each replication draws `se = σ √χ²(n) / n` and `mean = σ Z / √n` and forms
/// `mean ± t(1-α/2, n-1) se`. An interval covers when its ends have opposite
/// signs; with `σ = 0` both ends are exactly 0 and the interval counts as
/// covering.
pub fn simulate_normal(cfg: &SimConfig) -> Result<SimReport> {
    check(cfg, 2)?;
    let Family::Normal { sigma } = cfg.spec.family else {
        return Err(Error::Config("simulate_normal needs a normal design".into()));
    };
    let n = cfg.n as f64;
    let t = student_t_quantile(1.0 - 0.5 * cfg.spec.alpha.value(), n - 1.0)?;
    let chi = ChiSquared::new(n).map_err(|e| Error::Config(e.to_string()))?;
    let d0 = cfg.spec.d0;
    let root_n = n.sqrt();
    Ok(run_blocks(cfg, |rng, reps| {
        let mut tally = Tally::default();
        for _ in 0..reps {
            let se = sigma * chi.sample(rng).sqrt() / n;
            let z: f64 = rng.sample(StandardNormal);
            let mean = z * sigma / root_n;
            let lo = mean - se * t;
            let up = mean + se * t;
            if lo * up < 0.0 || (lo == 0.0 && up == 0.0) {
                tally.covered += 1;
            }
            if up - lo < d0 {
                tally.narrow += 1;
            }
        }
        tally
    }))
}

/// Poisson rate: `x ~ Poisson(rate·n)` and the Garwood interval for `x / n`.
/// Coverage requires `lower < rate < upper`.
pub fn simulate_poisson(cfg: &SimConfig) -> Result<SimReport> {
    check(cfg, 1)?;
    let Family::Poisson { rate } = cfg.spec.family else {
        return Err(Error::Config("simulate_poisson needs a poisson design".into()));
    };
    let n = cfg.n as f64;
    let lambda = rate * n;
    if !(lambda <= MAX_POISSON_MEAN) {
        return Err(Error::Config(format!("poisson mean rate*n = {lambda:e} exceeds {MAX_POISSON_MEAN:e}")));
    }
    let poisson = Poisson::new(lambda).map_err(|e| Error::Config(e.to_string()))?;
    let alpha = cfg.spec.alpha.value();
    let d0 = cfg.spec.d0;
    let classify = |x: u64| -> (bool, bool) {
        let ci = garwood_interval(x, alpha).expect("alpha validated").scaled(n);
        (ci.contains_strictly(rate), ci.width() < d0)
    };
    Ok(run_blocks(cfg, |rng, reps| tally_discrete(reps, || poisson.sample(rng) as u64, classify)))
}

/// Binomial proportion: `x ~ Bin(n, p0)` and the Wilson interval.
/// Coverage requires `lower < p0 < upper`.
pub fn simulate_binomial(cfg: &SimConfig) -> Result<SimReport> {
    check(cfg, 1)?;
    let Family::Binomial { p0 } = cfg.spec.family else {
        return Err(Error::Config("simulate_binomial needs a binomial design".into()));
    };
    let binomial = Binomial::new(cfg.n, p0).map_err(|e| Error::Config(e.to_string()))?;
    let alpha = cfg.spec.alpha.value();
    let d0 = cfg.spec.d0;
    let n = cfg.n;
    let classify = |x: u64| -> (bool, bool) {
        let ci = wilson_interval(x, n, alpha).expect("x <= n and alpha validated");
        (ci.contains_strictly(p0), ci.width() < d0)
    };
    Ok(run_blocks(cfg, |rng, reps| tally_discrete(reps, || binomial.sample(rng), classify)))
}

// Counts outcomes for a discrete statistic, classifying each distinct value once.
fn tally_discrete<D, C>(reps: u64, mut draw: D, classify: C) -> Tally
where
    D: FnMut() -> u64,
    C: Fn(u64) -> (bool, bool),
{
    let mut seen: HashMap<u64, (bool, bool)> = HashMap::new();
    let mut tally = Tally::default();
    for _ in 0..reps {
        let x = draw();
        let (covered, narrow) = *seen.entry(x).or_insert_with(|| classify(x));
        tally.covered += covered as u64;
        tally.narrow += narrow as u64;
    }
    tally
}
