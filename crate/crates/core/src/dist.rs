//! CDFs and quantiles of the standard normal, Student t, chi-square, Poisson
//! and binomial distributions.
//!
//! Continuous quantiles start from a closed-form or asymptotic guess and are
//! then solved on the CDF by safeguarded Newton iteration inside a bracket,
//! working on whichever tail is smaller so that `cdf(quantile(p))` recovers
//! `p` to well below `1e-10`. Discrete quantiles gallop outward from a
//! Cornish-Fisher guess and finish with an integer bisection, so they return
//! the exact smallest `q` with `cdf(q) >= p`.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::math::{exp, floor, ln, ln_1p, sqrt, tan};
use crate::special::{beta_inc_pair, deviance, gamma_density, gamma_pq, ln_gamma, ln_poisson_term, stirling_remainder};
use crate::types::{DegreesOfFreedom, Probability};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Standard normal CDF `Φ(z)`.
pub fn normal_cdf(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain("normal cdf argument must be finite"));
    }
    Ok(phi(z))
}

#[inline]
fn phi(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    exp(-0.5 * z * z - 0.5 * LN_2PI)
}

/// Standard normal quantile `Φ⁻¹(p)`.
///
/// Wichura's AS 241 rational approximation, followed by one Newton step on
/// [`normal_cdf`] evaluated in the smaller tail.
pub fn normal_quantile(p: f64) -> Result<f64> {
    let p = Probability::new(p)?.value();
    if p == 0.0 || p == 1.0 {
        return Err(Error::Infinite);
    }
    let x = as241(p);
    let residual = if p < 0.5 { phi(x) - p } else { (1.0 - p) - phi(-x) };
    Ok(x - residual / normal_pdf(x))
}

fn as241(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r
            + 6.726_577_092_700_87e4)
            * r
            + 4.592_195_393_154_987e4)
            * r
            + 1.373_169_376_550_946e4)
            * r
            + 1.971_590_950_306_551_3e3)
            * r
            + 1.331_416_678_917_843_8e2)
            * r
            + 3.387_132_872_796_366_5;
        let den = ((((((5.226_495_278_852_545e3 * r + 2.872_908_573_572_194_3e4) * r
            + 3.930_789_580_009_271e4)
            * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return q * num / den;
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = sqrt(-ln(tail));
    let value = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
            + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 1.519_866_656_361_645_7e-2)
            * r
            + 1.481_039_764_274_800_8e-1)
            * r
            + 6.897_673_349_851e-1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_7e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 1.487_536_129_085_061_5e-2)
            * r
            + 1.369_298_809_227_358e-1)
            * r
            + 5.998_322_065_558_88e-1)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}

// Solves g(x) = 0 for g nondecreasing on [lo, hi], g(lo) <= 0 <= g(hi).
// `g` returns the value and derivative; Newton steps that leave the bracket
// fall back to bisection (geometric when the bracket spans decades).
fn solve_increasing<G>(mut g: G, mut lo: f64, mut hi: f64, guess: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..500 {
        let (value, slope) = g(x)?;
        if value == 0.0 {
            return Ok(x);
        }
        if value < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let delta = value / slope;
        if delta.abs() <= 4.0 * f64::EPSILON * x.abs() {
            return Ok(x);
        }
        let mut next = x - delta;
        if !(next > lo && next < hi) {
            next = if lo <= 0.0 {
                hi / 16.0
            } else if hi / lo > 4.0 {
                sqrt(lo * hi)
            } else {
                0.5 * (lo + hi)
            };
        }
        let scale = next.abs().max(f64::MIN_POSITIVE);
        if (next - x).abs() <= 2.0 * f64::EPSILON * scale || hi - lo <= 2.0 * f64::EPSILON * scale {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence("quantile root finding"))
}

/// Chi-square CDF. Zero degrees of freedom is the point mass at 0.
pub fn chi_square_cdf(x: f64, df: f64) -> Result<f64> {
    let df = DegreesOfFreedom::new(df)?.value();
    if x.is_nan() {
        return Err(Error::Domain("chi-square cdf argument must not be NaN"));
    }
    if x < 0.0 {
        return Ok(0.0);
    }
    if df == 0.0 {
        return Ok(1.0);
    }
    gamma_pq(0.5 * df, 0.5 * x).map(|(p, _)| p)
}

/// Chi-square quantile: `x >= 0` with `P(df/2, x/2) = p`.
///
/// `df = 0` returns 0 for every `p` (point mass at 0); the Garwood lower
/// bound at a zero count relies on this.
pub fn chi_square_quantile(p: f64, df: f64) -> Result<f64> {
    let p = Probability::open(p)?.value();
    let df = DegreesOfFreedom::new(df)?.value();
    if df == 0.0 {
        return Ok(0.0);
    }
    let a = 0.5 * df;
    let lower_tail = p <= 0.5;
    let target = if lower_tail { p } else { 1.0 - p };

    // Wilson-Hilferty, or the leading term x^a / Γ(a+1) for small df or p.
    let z = as241(p);
    let h = 2.0 / (9.0 * df);
    let c = 1.0 - h + z * sqrt(h);
    let wh = df * c * c * c;
    let guess = if df >= 1.0 && wh > 0.0 {
        0.5 * wh
    } else {
        exp((ln(p) + ln_gamma(a + 1.0)) / a)
    };

    // Bracket in y = x / 2.
    let mut hi = (2.0 * guess).max(a + 10.0);
    while gamma_pq(a, hi)?.0 < p {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence("chi-square quantile bracketing"));
        }
    }
    let y = solve_increasing(
        |y| {
            let (lower, upper) = gamma_pq(a, y)?;
            let value = if lower_tail { lower - target } else { target - upper };
            Ok((value, gamma_density(a, y)))
        },
        0.0,
        hi,
        guess,
    )?;
    Ok(2.0 * y)
}

// Upper tail S(t) = P(T > t) for t >= 0.
fn student_t_upper(t: f64, df: f64) -> Result<f64> {
    if t.is_infinite() {
        return Ok(0.0);
    }
    let t2 = t * t;
    if t2 < df {
        let (_, q) = beta_inc_pair(0.5, 0.5 * df, t2 / (df + t2))?;
        Ok(0.5 * q)
    } else {
        let (p, _) = beta_inc_pair(0.5 * df, 0.5, df / (df + t2))?;
        Ok(0.5 * p)
    }
}

fn student_t_pdf(t: f64, df: f64) -> f64 {
    let ln_norm = ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df) - 0.5 * ln(df * PI);
    exp(ln_norm - 0.5 * (df + 1.0) * ln_1p(t * t / df))
}

/// Student t CDF with `df > 0` degrees of freedom.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) || df.is_infinite() {
        return Err(Error::Domain("student t requires finite df > 0"));
    }
    if t.is_nan() {
        return Err(Error::Domain("student t cdf argument must not be NaN"));
    }
    let upper = student_t_upper(t.abs(), df)?;
    Ok(if t >= 0.0 { 1.0 - upper } else { upper })
}

/// Student t quantile, `df >= 1`.
pub fn student_t_quantile(p: f64, df: f64) -> Result<f64> {
    let p = Probability::new(p)?.value();
    let df = DegreesOfFreedom::new(df)?.value();
    if df < 1.0 {
        return Err(Error::Domain("student t quantile requires df >= 1"));
    }
    if p == 0.0 || p == 1.0 {
        return Err(Error::Infinite);
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let tail = if p < 0.5 { p } else { 1.0 - p };
    let guess = if df == 1.0 {
        1.0 / tan(PI * tail)
    } else if df == 2.0 {
        (1.0 - 2.0 * tail) / sqrt(2.0 * tail * (1.0 - tail))
    } else {
        cornish_fisher_t(-as241(tail), df)
    };

    let mut hi = (2.0 * guess).max(1.0);
    while student_t_upper(hi, df)? > tail {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence("student t quantile bracketing"));
        }
    }
    let t = solve_increasing(
        |t| Ok((tail - student_t_upper(t, df)?, student_t_pdf(t, df))),
        0.0,
        hi,
        guess,
    )?;
    Ok(if p < 0.5 { -t } else { t })
}

fn cornish_fisher_t(z: f64, df: f64) -> f64 {
    let z2 = z * z;
    let g1 = (z2 + 1.0) * z / 4.0;
    let g2 = ((5.0 * z2 + 16.0) * z2 + 3.0) * z / 96.0;
    let g3 = (((3.0 * z2 + 19.0) * z2 + 17.0) * z2 - 15.0) * z / 384.0;
    let g4 = ((((79.0 * z2 + 776.0) * z2 + 1482.0) * z2 - 1920.0) * z2 - 945.0) * z / 92160.0;
    z + (g1 + (g2 + (g3 + g4 / df) / df) / df) / df
}

fn check_rate(lambda: f64) -> Result<f64> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::Domain("poisson mean must be finite and > 0"))
    }
}

/// Poisson probability mass `λ^k e^-λ / k!`.
pub fn poisson_pmf(k: u64, lambda: f64) -> Result<f64> {
    let lambda = check_rate(lambda)?;
    if k == 0 {
        return Ok(exp(-lambda));
    }
    Ok(exp(ln_poisson_term(k as f64, lambda)))
}

/// Poisson CDF `P(X <= k)`, computed as the upper regularized gamma `Q(k+1, λ)`.
pub fn poisson_cdf(k: u64, lambda: f64) -> Result<f64> {
    let lambda = check_rate(lambda)?;
    gamma_pq(k as f64 + 1.0, lambda).map(|(_, q)| q)
}

/// Smallest `q` with `poisson_cdf(q, λ) >= p`.
pub fn poisson_quantile(p: f64, lambda: f64) -> Result<u64> {
    let p = Probability::new(p)?.value();
    let lambda = check_rate(lambda)?;
    if p == 0.0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Err(Error::Infinite);
    }
    let z = as241(p);
    let sd = sqrt(lambda);
    let guess = floor(lambda + sd * (z + (z * z - 1.0) / (6.0 * sd)) - 0.5).max(0.0);
    smallest_with_cdf_at_least(p, guess as u64, u64::MAX, |k| poisson_cdf(k, lambda))
}

fn check_binomial(k: u64, n: u64, p: f64) -> Result<()> {
    Probability::new(p)?;
    if k > n {
        return Err(Error::Domain("binomial count must satisfy 0 <= k <= n"));
    }
    Ok(())
}

/// Binomial probability mass, Loader's saddle-point form.
pub fn binomial_pmf(k: u64, n: u64, p: f64) -> Result<f64> {
    check_binomial(k, n, p)?;
    let q = 1.0 - p;
    if p == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if k == n { 1.0 } else { 0.0 });
    }
    let nf = n as f64;
    if k == 0 {
        return Ok(exp(nf * ln_1p(-p)));
    }
    if k == n {
        return Ok(exp(nf * ln(p)));
    }
    let kf = k as f64;
    let lc = stirling_remainder(nf)
        - stirling_remainder(kf)
        - stirling_remainder(nf - kf)
        - deviance(kf, nf * p)
        - deviance(nf - kf, nf * q);
    let lf = LN_2PI + ln(kf) + ln_1p(-kf / nf);
    Ok(exp(lc - 0.5 * lf))
}

/// Binomial CDF `P(X <= k)` for `X ~ Bin(n, p)`, via `1 - I_p(k+1, n-k)`.
pub fn binomial_cdf(k: u64, n: u64, p: f64) -> Result<f64> {
    check_binomial(k, n, p)?;
    if k == n || p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    beta_inc_pair(k as f64 + 1.0, (n - k) as f64, p).map(|(_, upper)| upper)
}

/// Smallest `q` in `0..=n` with `binomial_cdf(q, n, p) >= prob`.
pub fn binomial_quantile(prob: f64, n: u64, p: f64) -> Result<u64> {
    let prob = Probability::new(prob)?.value();
    check_binomial(0, n, p)?;
    if prob == 0.0 || n == 0 || p == 0.0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(n);
    }
    let nf = n as f64;
    let mean = nf * p;
    let sd = sqrt(mean * (1.0 - p));
    let z = as241(prob);
    let skew = (1.0 - 2.0 * p) / sd;
    let guess = floor(mean + sd * (z + skew * (z * z - 1.0) / 6.0) - 0.5).clamp(0.0, nf);
    smallest_with_cdf_at_least(prob, guess as u64, n, |k| binomial_cdf(k, n, p))
}

// Gallops away from `guess` with doubling steps to bracket the answer, then
// bisects. Requires cdf nondecreasing and cdf(max) >= p.
fn smallest_with_cdf_at_least<F>(p: f64, guess: u64, max: u64, cdf: F) -> Result<u64>
where
    F: Fn(u64) -> Result<f64>,
{
    let guess = guess.min(max);
    // Invariant once bracketed: cdf(lo) < p <= cdf(hi), answer in (lo, hi].
    let (mut lo, mut hi);
    if cdf(guess)? >= p {
        hi = guess;
        let mut step = 1u64;
        loop {
            if hi == 0 {
                return Ok(0);
            }
            let candidate = hi.saturating_sub(step);
            if cdf(candidate)? >= p {
                hi = candidate;
                step = step.saturating_mul(2);
            } else {
                lo = candidate;
                break;
            }
        }
    } else {
        lo = guess;
        let mut step = 1u64;
        loop {
            if lo == max {
                return Err(Error::NoConvergence("discrete quantile search"));
            }
            let candidate = lo.saturating_add(step).min(max);
            if cdf(candidate)? >= p {
                hi = candidate;
                break;
            }
            lo = candidate;
            step = step.saturating_mul(2);
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if cdf(mid)? >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
