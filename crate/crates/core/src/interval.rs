//! Confidence intervals for the three worked families and their widths.
//!
//! * Normal mean: Student-t interval `m ± t(1-α/2, n-1) s / √n`.
//! * Poisson count: Garwood's chi-square interval
//!   `(½ χ²(α/2; 2x), ½ χ²(1-α/2; 2x+2))`, divided by the exposure for a rate.
//! * Binomial proportion: Wilson's score interval.
//!
//! Widths are always full widths `upper - lower`.

use crate::dist::{chi_square_quantile, normal_quantile, student_t_quantile};
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::types::Probability;

/// A closed interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower <= upper {
            Ok(Interval { lower, upper })
        } else {
            Err(Error::Domain("interval requires lower <= upper"))
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    #[inline]
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    /// `lower < value < upper`.
    #[inline]
    pub fn contains_strictly(&self, value: f64) -> bool {
        self.lower < value && value < self.upper
    }

    /// Both ends divided by `by`, e.g. a count interval turned into a rate.
    pub fn scaled(&self, by: f64) -> Interval {
        Interval { lower: self.lower / by, upper: self.upper / by }
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    Probability::open(alpha).map(Probability::value).map_err(|_| Error::Domain("alpha must be in (0, 1)"))
}

/// Summary of a normal sample: size, mean and `s` with `s² = Q / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalSample {
    pub n: u64,
    pub mean: f64,
    pub s: f64,
}

impl NormalSample {
    pub fn new(n: u64, mean: f64, s: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("normal sample needs n >= 2"));
        }
        if !(s >= 0.0) {
            return Err(Error::Domain("standard deviation estimate must be >= 0"));
        }
        Ok(NormalSample { n, mean, s })
    }

    pub fn interval(&self, alpha: f64) -> Result<Interval> {
        let half = 0.5 * normal_t_width(self.n, self.s, alpha)?;
        Ok(Interval { lower: self.mean - half, upper: self.mean + half })
    }
}

/// Width `2 s t(1-α/2, n-1) / √n` of the t interval.
pub fn normal_t_width(n: u64, s: f64, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("t interval needs n >= 2"));
    }
    if !(s >= 0.0) {
        return Err(Error::Domain("standard deviation estimate must be >= 0"));
    }
    let alpha = check_alpha(alpha)?;
    let t = student_t_quantile(1.0 - 0.5 * alpha, (n - 1) as f64)?;
    Ok(2.0 * s * t / sqrt(n as f64))
}

/// An observed event count over some exposure (person-time or sample size).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountSample {
    pub x: u64,
    pub exposure: f64,
}

impl CountSample {
    pub fn new(x: u64, exposure: f64) -> Result<Self> {
        if !(exposure > 0.0) || exposure.is_infinite() {
            return Err(Error::Domain("exposure must be finite and > 0"));
        }
        Ok(CountSample { x, exposure })
    }

    pub fn rate(&self) -> f64 {
        self.x as f64 / self.exposure
    }

    pub fn rate_interval(&self, alpha: f64) -> Result<Interval> {
        Ok(garwood_interval(self.x, alpha)?.scaled(self.exposure))
    }
}

/// Garwood interval for the mean of a Poisson count `x`.
pub fn garwood_interval(x: u64, alpha: f64) -> Result<Interval> {
    garwood_interval_at(x as f64, alpha)
}

/// Garwood interval evaluated at a real-valued count.
///
/// Plug-in sizing evaluates the interval at the expected count `λ = N·rate`,
/// which is generally not an integer; the chi-square quantiles accept real
/// degrees of freedom.
pub fn garwood_interval_at(count: f64, alpha: f64) -> Result<Interval> {
    if !(count >= 0.0) || count.is_infinite() {
        return Err(Error::Domain("count must be finite and >= 0"));
    }
    let alpha = check_alpha(alpha)?;
    let lower = if count == 0.0 { 0.0 } else { 0.5 * chi_square_quantile(0.5 * alpha, 2.0 * count)? };
    let upper = 0.5 * chi_square_quantile(1.0 - 0.5 * alpha, 2.0 * count + 2.0)?;
    Ok(Interval { lower, upper })
}

/// Width of the Garwood interval for the rate `x / exposure`.
pub fn garwood_rate_width(x: u64, exposure: f64, alpha: f64) -> Result<f64> {
    CountSample::new(x, exposure)?;
    Ok(garwood_interval(x, alpha)?.width() / exposure)
}

/// Observed successes out of `n` trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionSample {
    pub x: u64,
    pub n: u64,
}

impl ProportionSample {
    pub fn new(x: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("binomial sample needs n >= 1"));
        }
        if x > n {
            return Err(Error::Domain("successes must satisfy 0 <= x <= n"));
        }
        Ok(ProportionSample { x, n })
    }

    pub fn p_hat(&self) -> f64 {
        self.x as f64 / self.n as f64
    }
}

/// Wilson score interval for `x` successes in `n` trials.
pub fn wilson_interval(x: u64, n: u64, alpha: f64) -> Result<Interval> {
    let sample = ProportionSample::new(x, n)?;
    let z = wilson_z(alpha)?;
    let nf = n as f64;
    let p_hat = sample.p_hat();
    let z2 = z * z;
    let shrink = 1.0 + z2 / nf;
    let center = (p_hat + 0.5 * z2 / nf) / shrink;
    let half = z * sqrt(p_hat * (1.0 - p_hat) * nf + 0.25 * z2) / (nf * shrink);
    Ok(Interval { lower: (center - half).max(0.0), upper: (center + half).min(1.0) })
}

/// Width `2 z √(p̂(1-p̂) n + z²/4) / (n + z²)` of the Wilson interval.
pub fn wilson_width(p_hat: f64, n: u64, alpha: f64) -> Result<f64> {
    let p_hat = Probability::new(p_hat)?.value();
    if n == 0 {
        return Err(Error::Domain("binomial sample needs n >= 1"));
    }
    Ok(wilson_width_with_z(p_hat, n as f64, wilson_z(alpha)?))
}

#[inline]
pub(crate) fn wilson_width_with_z(p_hat: f64, n: f64, z: f64) -> f64 {
    let z2 = z * z;
    2.0 * z * sqrt(p_hat * (1.0 - p_hat) * n + 0.25 * z2) / (n * (1.0 + z2 / n))
}

pub(crate) fn wilson_z(alpha: f64) -> Result<f64> {
    normal_quantile(1.0 - 0.5 * check_alpha(alpha)?)
}

/// Anscombe's variance-stabilizing transform `2 √(x + 3/8)`.
pub fn anscombe_forward(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain("anscombe transform requires x >= 0"));
    }
    Ok(2.0 * sqrt(x + 0.375))
}

/// The recommended inverse `z²/4 - 1/8`.
///
/// Not an exact inverse of [`anscombe_forward`]: the round trip adds 1/4.
/// Meaningful for `z >= anscombe_forward(0)`.
pub fn anscombe_inverse(z: f64) -> f64 {
    0.25 * z * z - 0.125
}

/// Approximate `ψ`-quantile of a Poisson count with mean `λ` through the
/// Anscombe transform pair: `inverse(forward(λ) + z_ψ)`.
pub fn approx_poisson_power_quantile(lambda: f64, psi: f64) -> Result<f64> {
    if !(lambda > 0.0) || lambda.is_infinite() {
        return Err(Error::Domain("poisson mean must be finite and > 0"));
    }
    let z = normal_quantile(Probability::open(psi)?.value())?;
    Ok(anscombe_inverse(anscombe_forward(lambda)? + z))
}
