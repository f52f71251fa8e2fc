//! Statistical primitives for the Monte Carlo verdicts: regularized
//! incomplete gamma (series + continued fraction), error function and
//! normal CDF built on it, chi-square upper tail, the asymptotic
//! Kolmogorov-Smirnov distribution, Poisson masses, and sample moments.
//!
//! The gamma routines iterate to relative 1e-14, comfortably past the
//! 1e-8 the p-value gates need.

use crate::combinatorics::ln_gamma;

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 500;

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn reg_gamma_lower(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn reg_gamma_upper(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_continued_fraction(a, x)
    }
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_continued_fraction(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Error function, through the regularized gamma: `erf(x) = P(1/2, x^2)`
/// for `x >= 0`.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        -erf(-x)
    } else {
        reg_gamma_lower(0.5, x * x)
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else {
        reg_gamma_upper(0.5, x * x)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Upper tail of the chi-square distribution with `dof` degrees of
/// freedom.
pub fn chi_square_sf(statistic: f64, dof: u64) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    reg_gamma_upper(dof as f64 / 2.0, statistic / 2.0)
}

/// Asymptotic Kolmogorov survival function
/// `Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64) * (j as f64) * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Kolmogorov-Smirnov distance of a sample against the standard normal,
/// and its asymptotic p-value (with the usual finite-sample correction of
/// the effective sqrt(n)).
pub fn ks_test_standard_normal(sample: &[f64]) -> (f64, f64) {
    assert!(!sample.is_empty());
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, z) in sorted.iter().enumerate() {
        let cdf = normal_cdf(*z);
        let above = (i as f64 + 1.0) / n - cdf;
        let below = cdf - i as f64 / n;
        d = d.max(above).max(below);
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    (d, kolmogorov_sf(lambda))
}

/// Poisson mass `e^-lambda lambda^k / k!`.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    assert!(lambda > 0.0);
    (-lambda + k as f64 * lambda.ln() - ln_gamma(k as f64 + 1.0)).exp()
}

/// Sample moment summary: mean, unbiased variance, and the standardized
/// third/fourth sample moments.
#[derive(Debug, Clone, Copy)]
pub struct SampleMoments {
    pub len: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

pub fn sample_moments(sample: &[f64]) -> SampleMoments {
    let n = sample.len() as f64;
    assert!(sample.len() >= 2);
    let mean = sample.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in sample {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    SampleMoments {
        len: sample.len(),
        mean,
        variance: m2 * n / (n - 1.0),
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_reference_values() {
        assert!((erf(0.0)).abs() < 1e-15);
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-12);
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-12);
        assert!((erf(-1.0) + 0.842_700_792_949_714_9).abs() < 1e-12);
        assert!((erfc(2.0) - 0.004_677_734_981_047_266).abs() < 1e-14);
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.96) - 0.975_002_104_851_779_5).abs() < 1e-12);
        assert!((normal_cdf(-1.96) - 0.024_997_895_148_220_48).abs() < 1e-12);
    }

    #[test]
    fn chi_square_sf_closed_forms() {
        // dof 2: sf(x) = exp(-x/2); dof 1: sf(x) = erfc(sqrt(x/2))
        assert!((chi_square_sf(2.0, 2) - (-1.0f64).exp()).abs() < 1e-13);
        assert!((chi_square_sf(4.0, 1) - 0.045_500_263_896_358_42).abs() < 1e-12);
        assert!((chi_square_sf(0.0, 5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_pq_sum_to_one() {
        for &a in &[0.5, 1.0, 3.5, 10.0, 50.0] {
            for &x in &[0.1, 1.0, 5.0, 40.0, 120.0] {
                let p = reg_gamma_lower(a, x);
                let q = reg_gamma_upper(a, x);
                assert!((p + q - 1.0).abs() < 1e-12, "a={a} x={x}");
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }

    #[test]
    fn kolmogorov_sf_reference_values() {
        // classic table values of the Kolmogorov distribution
        assert!((kolmogorov_sf(1.0) - 0.269_999_967_168).abs() < 1e-6);
        assert!((kolmogorov_sf(1.36) - 0.049_485_876_755_377_9).abs() < 1e-10);
        assert!(kolmogorov_sf(0.1) == 1.0);
        assert!(kolmogorov_sf(3.0) < 1e-7);
    }

    #[test]
    fn ks_accepts_its_own_null() {
        // stratified normal scores are as close to the null as a sample
        // can be; D should be tiny and p close to 1
        let n = 2000;
        let sample: Vec<f64> = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                inverse_normal(u)
            })
            .collect();
        let (d, p) = ks_test_standard_normal(&sample);
        assert!(d < 0.01, "d={d}");
        assert!(p > 0.99, "p={p}");
    }

    #[test]
    fn ks_rejects_a_shifted_sample() {
        let n = 2000;
        let sample: Vec<f64> = (0..n)
            .map(|i| inverse_normal((i as f64 + 0.5) / n as f64) + 0.5)
            .collect();
        let (_, p) = ks_test_standard_normal(&sample);
        assert!(p < 1e-6, "p={p}");
    }

    /// Bisection inverse of the normal CDF, for test fixtures only.
    fn inverse_normal(u: f64) -> f64 {
        let (mut lo, mut hi) = (-10.0f64, 10.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if normal_cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn poisson_pmf_normalizes() {
        let lambda = 2.0f64.ln();
        let total: f64 = (0..60).map(|k| poisson_pmf(lambda, k)).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!((poisson_pmf(lambda, 0) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn sample_moments_on_known_data() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        let m = sample_moments(&xs);
        assert!((m.mean - 5.0).abs() < 1e-14);
        assert!((m.variance - 32.0 / 7.0).abs() < 1e-14);
        // population sd is 2; skew = E[(x-5)^3]/8
        let skew_expect = (xs.iter().map(|x| (x - 5.0).powi(3)).sum::<f64>() / 8.0) / 8.0;
        assert!((m.skewness - skew_expect).abs() < 1e-14);
    }
}
