#![allow(dead_code)]

use ciwidth_core::dist::{chi_square_cdf, poisson_pmf, binomial_pmf, student_t_cdf, student_t_quantile};
use ciwidth_core::interval::{garwood_interval, wilson_interval};

/// One published row: design, then (n, coverage, power) for the expected and
/// exact sizes.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceRow {
    pub param: f64,
    pub width0: f64,
    pub alpha: f64,
    pub power: f64,
    pub n_expected: u64,
    pub cov_expected: f64,
    pub pow_expected: f64,
    pub n_exact: u64,
    pub cov_exact: f64,
    pub pow_exact: f64,
}

const fn row(
    param: f64,
    width0: f64,
    alpha: f64,
    power: f64,
    expected: (u64, f64, f64),
    exact: (u64, f64, f64),
) -> ReferenceRow {
    ReferenceRow {
        param,
        width0,
        alpha,
        power,
        n_expected: expected.0,
        cov_expected: expected.1,
        pow_expected: expected.2,
        n_exact: exact.0,
        cov_exact: exact.1,
        pow_exact: exact.2,
    }
}

/// Normal mean, σ = 1.
pub const TABLE1: [ReferenceRow; 16] = [
    row(1.0, 0.5, 0.05, 0.8, (62, 0.9478, 0.4552), (73, 0.9489, 0.8135)),
    row(1.0, 0.5, 0.05, 0.9, (62, 0.9491, 0.4422), (78, 0.9456, 0.9177)),
    row(1.0, 0.5, 0.10, 0.8, (44, 0.9037, 0.4807), (53, 0.9001, 0.8299)),
    row(1.0, 0.5, 0.10, 0.9, (44, 0.8921, 0.4791), (57, 0.9016, 0.9170)),
    row(1.0, 0.25, 0.05, 0.8, (246, 0.9518, 0.4745), (267, 0.9453, 0.8144)),
    row(1.0, 0.25, 0.05, 0.9, (246, 0.9526, 0.4682), (276, 0.9507, 0.9026)),
    row(1.0, 0.25, 0.10, 0.8, (174, 0.8961, 0.4883), (190, 0.9036, 0.7972)),
    row(1.0, 0.25, 0.10, 0.9, (174, 0.9007, 0.4871), (198, 0.9062, 0.8998)),
    row(1.0, 0.125, 0.05, 0.8, (984, 0.9504, 0.4839), (1023, 0.9527, 0.8077)),
    row(1.0, 0.125, 0.05, 0.9, (984, 0.9494, 0.4983), (1042, 0.9491, 0.9046)),
    row(1.0, 0.125, 0.10, 0.8, (693, 0.8985, 0.4848), (725, 0.9041, 0.8022)),
    row(1.0, 0.125, 0.10, 0.9, (693, 0.9007, 0.4886), (742, 0.8965, 0.9075)),
    row(1.0, 0.0625, 0.05, 0.8, (3934, 0.9501, 0.4899), (4010, 0.9479, 0.7986)),
    row(1.0, 0.0625, 0.05, 0.9, (3934, 0.9484, 0.4942), (4049, 0.9488, 0.9025)),
    row(1.0, 0.0625, 0.10, 0.8, (2771, 0.9055, 0.4979), (2835, 0.8974, 0.8035)),
    row(1.0, 0.0625, 0.10, 0.9, (2771, 0.9004, 0.4949), (2867, 0.9004, 0.9043)),
];

/// Poisson rate, α = 0.05. Widths are 0.2·rate and 0.1·rate.
pub const TABLE2: [ReferenceRow; 16] = [
    row(0.01, 0.2, 0.05, 0.8, (39439, 0.9532, 0.5055), (41064, 0.9589, 0.8070)),
    row(0.01, 0.2, 0.05, 0.9, (39439, 0.9534, 0.5092), (41861, 0.9515, 0.9045)),
    row(0.01, 0.1, 0.05, 0.8, (155683, 0.9479, 0.4929), (158936, 0.9491, 0.8072)),
    row(0.01, 0.1, 0.05, 0.9, (155683, 0.9529, 0.4917), (160630, 0.9537, 0.9050)),
    row(0.02, 0.2, 0.05, 0.8, (19719, 0.9538, 0.5064), (20532, 0.9561, 0.8162)),
    row(0.02, 0.2, 0.05, 0.9, (19719, 0.9548, 0.4972), (20931, 0.9512, 0.9042)),
    row(0.02, 0.1, 0.05, 0.8, (77841, 0.9562, 0.5008), (79468, 0.9500, 0.8069)),
    row(0.02, 0.1, 0.05, 0.9, (77841, 0.9499, 0.5040), (80315, 0.9540, 0.9047)),
    row(0.04, 0.2, 0.05, 0.8, (9859, 0.9521, 0.5120), (10266, 0.9513, 0.8112)),
    row(0.04, 0.2, 0.05, 0.9, (9859, 0.9535, 0.5066), (10466, 0.9530, 0.9014)),
    row(0.04, 0.1, 0.05, 0.8, (38920, 0.9498, 0.5011), (39734, 0.9490, 0.7996)),
    row(0.04, 0.1, 0.05, 0.9, (38920, 0.9502, 0.4944), (40158, 0.9509, 0.8971)),
    row(0.08, 0.2, 0.05, 0.8, (4929, 0.9534, 0.5072), (5133, 0.9559, 0.8047)),
    row(0.08, 0.2, 0.05, 0.9, (4929, 0.9532, 0.5034), (5233, 0.9490, 0.9037)),
    row(0.08, 0.1, 0.05, 0.8, (19460, 0.9532, 0.5021), (19867, 0.9510, 0.8057)),
    row(0.08, 0.1, 0.05, 0.9, (19460, 0.9510, 0.4965), (20079, 0.9492, 0.9075)),
];

/// Binomial proportion, α = 0.05.
pub const TABLE3: [ReferenceRow; 16] = [
    row(0.5, 0.10, 0.05, 0.8, (381, 0.944, 1.0), (381, 0.947, 1.0)),
    row(0.5, 0.10, 0.05, 0.9, (381, 0.943, 1.0), (381, 0.948, 1.0)),
    row(0.5, 0.05, 0.05, 0.8, (1533, 0.951, 1.0), (1533, 0.950, 1.0)),
    row(0.5, 0.05, 0.05, 0.9, (1533, 0.947, 1.0), (1533, 0.949, 1.0)),
    row(0.25, 0.10, 0.05, 0.8, (286, 0.945, 0.5078), (302, 0.955, 0.8253)),
    row(0.25, 0.10, 0.05, 0.9, (286, 0.944, 0.5031), (309, 0.957, 0.9061)),
    row(0.25, 0.05, 0.05, 0.8, (1150, 0.951, 0.5005), (1182, 0.951, 0.8134)),
    row(0.25, 0.05, 0.05, 0.9, (1150, 0.949, 0.4961), (1199, 0.952, 0.8989)),
    row(0.125, 0.10, 0.05, 0.8, (170, 0.953, 0.5351), (192, 0.938, 0.8397)),
    row(0.125, 0.10, 0.05, 0.9, (170, 0.950, 0.5378), (201, 0.957, 0.9097)),
    row(0.125, 0.05, 0.05, 0.8, (674, 0.952, 0.5091), (722, 0.952, 0.8227)),
    row(0.125, 0.05, 0.05, 0.9, (674, 0.953, 0.5203), (745, 0.949, 0.9145)),
    row(0.0625, 0.10, 0.05, 0.8, (98, 0.945, 0.5850), (121, 0.944, 0.8624)),
    row(0.0625, 0.10, 0.05, 0.9, (98, 0.948, 0.5839), (132, 0.953, 0.9326)),
    row(0.0625, 0.05, 0.05, 0.8, (369, 0.961, 0.5564), (424, 0.958, 0.8479)),
    row(0.0625, 0.05, 0.05, 0.9, (369, 0.960, 0.5484), (449, 0.952, 0.9293)),
];

/// Table 2 stores width factors; this is the width itself.
pub fn poisson_width(row: &ReferenceRow) -> f64 {
    row.width0 * row.param
}

/// Exact coverage and `P(width < d0)` of the simulated Normal model, where
/// `se = σ √χ²(n) / n`: the t statistic has `n` degrees of freedom, so
/// coverage is `2 F_t(t_crit; n) - 1` and the width condition is a
/// chi-square tail.
pub fn normal_exact(n: u64, sigma: f64, alpha: f64, d0: f64) -> (f64, f64) {
    let nf = n as f64;
    let t = student_t_quantile(1.0 - alpha / 2.0, nf - 1.0).unwrap();
    let coverage = 2.0 * student_t_cdf(t, nf).unwrap() - 1.0;
    let bound = d0 * nf / (2.0 * t * sigma);
    (coverage, chi_square_cdf(bound * bound, nf).unwrap())
}

/// `P(width <= d0)` under the sizing model `s² = σ² χ²(n-1) / n`.
pub fn normal_width_probability(n: u64, sigma: f64, alpha: f64, d0: f64) -> f64 {
    let nf = n as f64;
    let t = student_t_quantile(1.0 - alpha / 2.0, nf - 1.0).unwrap();
    let bound = d0 * nf / (2.0 * t * sigma);
    chi_square_cdf(bound * bound, nf - 1.0).unwrap()
}

fn count_range(mean: f64, sd: f64, max: u64) -> std::ops::RangeInclusive<u64> {
    let lo = (mean - 15.0 * sd - 30.0).max(0.0) as u64;
    let hi = ((mean + 15.0 * sd + 30.0) as u64).min(max);
    lo..=hi
}

/// Exact Poisson probabilities by pmf summation: (coverage, P(width < d0),
/// P(width <= d0)).
pub fn poisson_exact(n: u64, rate: f64, alpha: f64, d0: f64) -> (f64, f64, f64) {
    let nf = n as f64;
    let lambda = rate * nf;
    let (mut cov, mut lt, mut le) = (0.0, 0.0, 0.0);
    for x in count_range(lambda, lambda.sqrt(), u64::MAX) {
        let p = poisson_pmf(x, lambda).unwrap();
        let ci = garwood_interval(x, alpha).unwrap().scaled(nf);
        if ci.contains_strictly(rate) {
            cov += p;
        }
        if ci.width() < d0 {
            lt += p;
        }
        if ci.width() <= d0 {
            le += p;
        }
    }
    (cov, lt, le)
}

/// Exact Binomial probabilities by pmf summation: (coverage, P(width < d0),
/// P(width <= d0)).
pub fn binomial_exact(n: u64, p0: f64, alpha: f64, d0: f64) -> (f64, f64, f64) {
    let mean = n as f64 * p0;
    let sd = (mean * (1.0 - p0)).sqrt();
    let (mut cov, mut lt, mut le) = (0.0, 0.0, 0.0);
    for x in count_range(mean, sd, n) {
        let p = binomial_pmf(x, n, p0).unwrap();
        let ci = wilson_interval(x, n, alpha).unwrap();
        if ci.contains_strictly(p0) {
            cov += p;
        }
        if ci.width() < d0 {
            lt += p;
        }
        if ci.width() <= d0 {
            le += p;
        }
    }
    (cov, lt, le)
}
