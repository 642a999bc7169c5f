//! Simulated frequencies against exact probabilities at a large replication
//! count, and independence of the thread count.

mod common;

use ciwidth::mc::{simulate, SimConfig, SimReport};
use ciwidth_core::{DesignSpec, Family};
use common::*;

const NSIM: u64 = 1_000_000;

fn within(got: f64, want: f64, what: &str) {
    let sd = (want * (1.0 - want) / NSIM as f64).sqrt().max(1.0 / NSIM as f64);
    assert!((got - want).abs() <= 3.0 * sd, "{what}: simulated {got}, exact {want}, 3 sd = {}", 3.0 * sd);
}

fn run(family: Family, n: u64, alpha: f64, d0: f64, seed: u64) -> SimReport {
    let spec = DesignSpec::new(family, alpha, 0.8, d0).unwrap();
    simulate(&SimConfig { nsim: NSIM, seed, spec, n }).unwrap()
}

#[test]
fn normal_matches_exact() {
    let r = run(Family::Normal { sigma: 1.0 }, 73, 0.05, 0.5, 101);
    let (cov, pow) = normal_exact(73, 1.0, 0.05, 0.5);
    within(r.coverage, cov, "coverage");
    within(r.power, pow, "power");
}

#[test]
fn poisson_matches_exact() {
    let r = run(Family::Poisson { rate: 0.08 }, 5133, 0.05, 0.016, 102);
    let (cov, pow, _) = poisson_exact(5133, 0.08, 0.05, 0.016);
    within(r.coverage, cov, "coverage");
    within(r.power, pow, "power");
}

#[test]
fn binomial_matches_exact() {
    let r = run(Family::Binomial { p0: 0.25 }, 302, 0.05, 0.1, 103);
    let (cov, pow, _) = binomial_exact(302, 0.25, 0.05, 0.1);
    within(r.coverage, cov, "coverage");
    within(r.power, pow, "power");
}

#[test]
fn thread_count_does_not_change_results() {
    let spec = DesignSpec::new(Family::Binomial { p0: 0.125 }, 0.05, 0.9, 0.05).unwrap();
    let cfg = SimConfig { nsim: 50_000, seed: 7, spec, n: 745 };
    let with = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| simulate(&cfg).unwrap())
    };
    assert_eq!(with(1), with(4));
}
