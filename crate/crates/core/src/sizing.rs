//! Expected and exact sample sizes for the Normal, Poisson and Binomial
//! families.
//!
//! *Expected* sizes plug the assumed parameter into the width formula. *Exact*
//! sizes replace the statistic by its `psi0`-quantile, which is the widest
//! member of the smallest set of outcomes holding probability `psi0`; the
//! interval is then no wider than `d0` with probability at least `psi0`.
//!
//! The integer conventions follow the classic reference tables:
//!
//! * [`n_exact_normal`] is one more than the smallest `N` meeting the
//!   quantile-width condition.
//! * [`n_expected_poisson`] is the largest `N` whose plug-in width still
//!   exceeds `d0` (one below the first fitting size when `step = 1`).
//! * The remaining searches return the first size of the final fitting run.

use crate::dist::{binomial_quantile, chi_square_quantile, normal_quantile, poisson_quantile, student_t_quantile};
use crate::error::{Error, Result};
use crate::interval::{garwood_interval, garwood_interval_at, wilson_width_with_z, wilson_z};
use crate::math::{ceil, floor, sqrt};
use crate::search::{find_exact_n, search_min_n, SearchPolicy};
use crate::types::Probability;

/// Distribution family and its assumed parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Family {
    Normal { sigma: f64 },
    Poisson { rate: f64 },
    Binomial { p0: f64 },
}

/// A complete sizing problem.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DesignSpec {
    pub family: Family,
    pub alpha: Probability,
    pub psi0: Probability,
    pub d0: f64,
}

impl DesignSpec {
    pub fn new(family: Family, alpha: f64, psi0: f64, d0: f64) -> Result<Self> {
        let spec = DesignSpec { family, alpha: Probability::new(alpha)?, psi0: Probability::new(psi0)?, d0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha.value())?;
        check_psi(self.psi0.value())?;
        check_width(self.d0)?;
        match self.family {
            Family::Normal { sigma } => check_positive(sigma, "sigma must be finite and > 0").map(drop),
            Family::Poisson { rate } => check_positive(rate, "rate must be finite and > 0").map(drop),
            Family::Binomial { p0 } => check_p0(p0).map(drop),
        }
    }
}

/// Sample sizes for one design and the widths they achieve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizingResult {
    pub n_expected: u64,
    pub n_exact: u64,
    /// Closed-form approximation, Normal family only.
    pub n_approx: Option<u64>,
    /// Plug-in width at `n_expected`.
    pub width_at_expected: f64,
    /// `psi0`-quantile width at `n_exact`.
    pub width_at_exact: f64,
}

impl SizingResult {
    /// `n_exact < n_expected` never happens for sensible designs.
    pub fn is_anomalous(&self) -> bool {
        self.n_exact < self.n_expected
    }

    /// `(n_exact - n_expected) / n_expected`.
    pub fn relative_inflation(&self) -> f64 {
        (self.n_exact as f64 - self.n_expected as f64) / self.n_expected as f64
    }
}

fn check_positive(x: f64, what: &'static str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(what))
    }
}

fn check_width(d0: f64) -> Result<f64> {
    check_positive(d0, "width must be finite and > 0")
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(Error::Domain("alpha must be in (0, 1)"))
    }
}

fn check_psi(psi: f64) -> Result<f64> {
    if psi > 0.5 && psi < 1.0 {
        Ok(psi)
    } else {
        Err(Error::Domain("power must be in (0.5, 1)"))
    }
}

fn check_p0(p0: f64) -> Result<f64> {
    if p0 > 0.0 && p0 < 1.0 {
        Ok(p0)
    } else {
        Err(Error::Domain("p0 must be in (0, 1)"))
    }
}

fn to_count(x: f64) -> Result<u64> {
    if x.is_finite() && x < u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(Error::Domain("sample size does not fit in 64 bits"))
    }
}

// ---------------------------------------------------------------- Normal

/// `ceil((2 z σ / d0)²)` with `z = Φ⁻¹(1 - α/2)`.
pub fn n_expected_normal(sigma: f64, d0: f64, alpha: f64) -> Result<u64> {
    let sigma = check_positive(sigma, "sigma must be finite and > 0")?;
    let d0 = check_width(d0)?;
    let z = normal_quantile(1.0 - 0.5 * check_alpha(alpha)?)?;
    let r = 2.0 * z * sigma / d0;
    to_count(ceil(r * r))
}

/// Plug-in width `2 z σ / √n` of the known-variance interval.
pub fn normal_expected_width(n: u64, sigma: f64, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("sample size must be >= 1"));
    }
    let z = normal_quantile(1.0 - 0.5 * check_alpha(alpha)?)?;
    Ok(2.0 * z * sigma / sqrt(n as f64))
}

/// `2 t(1-α/2, n-1) σ √χ²(ψ, n-1) / n`: the t-interval width when `s` sits at
/// its `ψ`-quantile. Infinite for `n < 2`.
pub fn normal_quantile_width(n: u64, sigma: f64, alpha: f64, psi: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let psi = Probability::open(psi)?.value();
    if n < 2 {
        return Ok(f64::INFINITY);
    }
    let df = (n - 1) as f64;
    let t = student_t_quantile(1.0 - 0.5 * alpha, df)?;
    Ok(2.0 * t * sigma * sqrt(chi_square_quantile(psi, df)?) / n as f64)
}

/// Exact Normal size with the default search (unit steps from the expected size).
pub fn n_exact_normal(sigma: f64, d0: f64, alpha: f64, psi0: f64) -> Result<u64> {
    let start = n_expected_normal(sigma, d0, alpha)?;
    let policy = SearchPolicy { start: start.saturating_sub(1).max(1), jump: 1, step: 1, headroom: 0 };
    n_exact_normal_with(sigma, d0, alpha, psi0, &policy)
}

/// One more than the smallest `N` with `normal_quantile_width(N) <= d0`.
pub fn n_exact_normal_with(sigma: f64, d0: f64, alpha: f64, psi0: f64, policy: &SearchPolicy) -> Result<u64> {
    let sigma = check_positive(sigma, "sigma must be finite and > 0")?;
    let d0 = check_width(d0)?;
    let alpha = check_alpha(alpha)?;
    let psi0 = check_psi(psi0)?;
    let n = find_exact_n(|n| normal_quantile_width(n, sigma, alpha, psi0), d0, policy)?;
    Ok(n + 1)
}

/// Approximate exact size using `χ²(ψ, n) ≈ (√(2n) + z_ψ)² / 2`.
///
/// Scans from `floor(4 (z d0/σ)²)` (at least 1) to the first `n` meeting the
/// approximate condition and returns `n + 3`. Agrees with [`n_exact_normal`]
/// to within a couple of units.
pub fn n_approx_normal(sigma: f64, d0: f64, alpha: f64, psi0: f64) -> Result<u64> {
    let sigma = check_positive(sigma, "sigma must be finite and > 0")?;
    let d0 = check_width(d0)?;
    let za = normal_quantile(1.0 - 0.5 * check_alpha(alpha)?)?;
    let zb = normal_quantile(check_psi(psi0)?)?;
    let dn = d0 / sigma;
    let fits = |s: u64| {
        let root = sqrt(2.0 * s as f64) + zb;
        let qb = 0.5 * root * root;
        2.0 * za * sqrt(qb) / s as f64 <= dn
    };
    let mut s = to_count(floor(4.0 * (za * dn) * (za * dn)))?.max(1);
    if fits(s) {
        while s > 1 && fits(s - 1) {
            s -= 1;
        }
    } else {
        while !fits(s) {
            s = s.checked_add(1).ok_or(Error::SearchExhausted { evaluations: s })?;
        }
    }
    Ok(s + 3)
}

// --------------------------------------------------------------- Poisson

fn poisson_start(rate: f64, d0: f64) -> f64 {
    ceil(16.0 * rate / (d0 * d0))
}

impl SearchPolicy {
    /// Plug-in Poisson search: start `ceil(16 rate / d0²)`, jump a tenth of it.
    pub fn poisson_expected(rate: f64, d0: f64) -> Result<Self> {
        let rate = check_positive(rate, "rate must be finite and > 0")?;
        let d0 = check_width(d0)?;
        Ok(SearchPolicy::from_start(to_count(poisson_start(rate, d0))?))
    }

    /// Exact Poisson search: as the plug-in one, descending from at least one
    /// jump and three count periods (`3 / rate`) past the first hit.
    pub fn poisson_exact(rate: f64, d0: f64) -> Result<Self> {
        let base = Self::poisson_expected(rate, d0)?;
        let periods = to_count(ceil(3.0 / rate))?;
        Ok(base.headroom(base.jump.max(periods)))
    }

    /// Plug-in Binomial search: start `ceil(z² p0 (1 - p0) / d0²)`, jump 10,
    /// descending from one jump past the first hit.
    pub fn binomial_expected(p0: f64, d0: f64, alpha: f64) -> Result<Self> {
        let p0 = check_p0(p0)?;
        let d0 = check_width(d0)?;
        let z = wilson_z(alpha)?;
        let start = to_count(ceil(z * z * p0 * (1.0 - p0) / d0 / d0))?.max(1);
        Ok(SearchPolicy { start, jump: 10, step: 1, headroom: 10 })
    }

    /// Exact Binomial search: start 5, jump 10, descending from at least one
    /// jump and three count periods (`3 / min(p0, 1 - p0)`) past the first hit.
    pub fn binomial_exact(p0: f64) -> Result<Self> {
        let p = min_p(check_p0(p0)?);
        let periods = to_count(ceil(3.0 / p))?;
        Ok(SearchPolicy { start: 5, jump: 10, step: 1, headroom: periods.max(10) })
    }
}

/// Garwood width per unit exposure at the real-valued expected count `n·rate`.
pub fn poisson_expected_width(n: u64, rate: f64, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("sample size must be >= 1"));
    }
    let nf = n as f64;
    Ok(garwood_interval_at(nf * rate, alpha)?.width() / nf)
}

/// Garwood rate width at the `ψ`-quantile count `Q(ψ, n·rate)`.
pub fn poisson_quantile_width(n: u64, rate: f64, alpha: f64, psi: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("sample size must be >= 1"));
    }
    let x = poisson_quantile(Probability::open(psi)?.value(), n as f64 * rate)?;
    Ok(garwood_interval(x, alpha)?.width() / n as f64)
}

/// Plug-in Poisson exposure: the largest `N` found by the search whose
/// plug-in width still exceeds `d0`.
pub fn n_expected_poisson(rate: f64, d0: f64, alpha: f64, policy: &SearchPolicy) -> Result<u64> {
    let rate = check_positive(rate, "rate must be finite and > 0")?;
    let alpha = check_alpha(alpha)?;
    let n = find_exact_n(|n| poisson_expected_width(n, rate, alpha), d0, policy)?;
    Ok(n.saturating_sub(policy.step))
}

/// Smallest exposure `N` (end of the final crossing) with the Garwood width at
/// `Q(psi0, N·rate)` no larger than `d0`.
pub fn n_exact_poisson(rate: f64, d0: f64, alpha: f64, psi0: f64, policy: &SearchPolicy) -> Result<u64> {
    let rate = check_positive(rate, "rate must be finite and > 0")?;
    let alpha = check_alpha(alpha)?;
    let psi0 = check_psi(psi0)?;
    // neighbouring sizes mostly share the same quantile count
    let mut memo: Option<(u64, f64)> = None;
    let mut width = |n: u64| -> Result<f64> {
        let x = poisson_quantile(psi0, n as f64 * rate)?;
        let w = match memo {
            Some((mx, mw)) if mx == x => mw,
            _ => {
                let w = garwood_interval(x, alpha)?.width();
                memo = Some((x, w));
                w
            }
        };
        Ok(w / n as f64)
    };
    find_exact_n(&mut width, d0, policy)
}

// -------------------------------------------------------------- Binomial

#[inline]
fn min_p(p0: f64) -> f64 {
    p0.min(1.0 - p0)
}

/// Wilson width at `p̂ = min(p0, 1 - p0)`.
pub fn binomial_expected_width(n: u64, p0: f64, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("sample size must be >= 1"));
    }
    Ok(wilson_width_with_z(min_p(check_p0(p0)?), n as f64, wilson_z(alpha)?))
}

/// Wilson width at `p̂ = min(0.5, Q(ψ; n, min(p0, 1 - p0)) / n)`.
pub fn binomial_quantile_width(n: u64, p0: f64, alpha: f64, psi: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("sample size must be >= 1"));
    }
    let z = wilson_z(alpha)?;
    binomial_quantile_width_with_z(n, min_p(check_p0(p0)?), z, Probability::open(psi)?.value())
}

fn binomial_quantile_width_with_z(n: u64, p: f64, z: f64, psi: f64) -> Result<f64> {
    let q = binomial_quantile(psi, n, p)?;
    let p_hat = (q as f64 / n as f64).min(0.5);
    Ok(wilson_width_with_z(p_hat, n as f64, z))
}

/// Plug-in Binomial size: start of the final run with Wilson width at
/// `min(p0, 1 - p0)` strictly below `d0`.
pub fn n_expected_binomial(p0: f64, d0: f64, alpha: f64, policy: &SearchPolicy) -> Result<u64> {
    let p = min_p(check_p0(p0)?);
    let d0 = check_width(d0)?;
    let z = wilson_z(alpha)?;
    search_min_n(|n| Ok(wilson_width_with_z(p, n as f64, z) < d0), policy)
}

/// Exact Binomial size: start of the final run with the Wilson width at the
/// `psi0`-quantile proportion strictly below `d0`.
pub fn n_exact_binomial(p0: f64, d0: f64, alpha: f64, psi0: f64, policy: &SearchPolicy) -> Result<u64> {
    let p = min_p(check_p0(p0)?);
    let d0 = check_width(d0)?;
    let z = wilson_z(alpha)?;
    let psi0 = check_psi(psi0)?;
    search_min_n(|n| Ok(binomial_quantile_width_with_z(n, p, z, psi0)? < d0), policy)
}

// -------------------------------------------------------------- dispatch

/// Sizes a design with the default search policies.
pub fn size(spec: &DesignSpec) -> Result<SizingResult> {
    spec.validate()?;
    let alpha = spec.alpha.value();
    let psi0 = spec.psi0.value();
    let d0 = spec.d0;
    match spec.family {
        Family::Normal { sigma } => {
            let n_expected = n_expected_normal(sigma, d0, alpha)?;
            let n_exact = n_exact_normal(sigma, d0, alpha, psi0)?;
            Ok(SizingResult {
                n_expected,
                n_exact,
                n_approx: Some(n_approx_normal(sigma, d0, alpha, psi0)?),
                width_at_expected: normal_expected_width(n_expected, sigma, alpha)?,
                width_at_exact: normal_quantile_width(n_exact, sigma, alpha, psi0)?,
            })
        }
        Family::Poisson { rate } => {
            let n_expected = n_expected_poisson(rate, d0, alpha, &SearchPolicy::poisson_expected(rate, d0)?)?;
            let n_exact = n_exact_poisson(rate, d0, alpha, psi0, &SearchPolicy::poisson_exact(rate, d0)?)?;
            Ok(SizingResult {
                n_expected,
                n_exact,
                n_approx: None,
                width_at_expected: poisson_expected_width(n_expected.max(1), rate, alpha)?,
                width_at_exact: poisson_quantile_width(n_exact, rate, alpha, psi0)?,
            })
        }
        Family::Binomial { p0 } => {
            let n_expected = n_expected_binomial(p0, d0, alpha, &SearchPolicy::binomial_expected(p0, d0, alpha)?)?;
            let n_exact = n_exact_binomial(p0, d0, alpha, psi0, &SearchPolicy::binomial_exact(p0)?)?;
            Ok(SizingResult {
                n_expected,
                n_exact,
                n_approx: None,
                width_at_expected: binomial_expected_width(n_expected, p0, alpha)?,
                width_at_exact: binomial_quantile_width(n_exact, p0, alpha, psi0)?,
            })
        }
    }
}
