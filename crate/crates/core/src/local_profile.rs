//! Exact and asymptotic law of the containment level `C_{n,k}` of one
//! vertex: moments, moment generating function, exact pmf, an independent
//! Bernoulli-convolution oracle, and the phase limit laws.
//!
//! `C_{n,k} - 1` is a sum of independent indicators, one per step after the
//! vertex joined, with step `i` succeeding with probability
//! `(theta-1)/(i+theta-1)`. Everything here derives from that
//! decomposition, through two deliberately separate routes: a closed form
//! assembled from Stirling numbers, and direct convolution.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{digamma, ln_gamma, rising_factorial_int, StirlingTable};
use crate::error::{Error, Result};
use crate::growth::indicator_prob;
use crate::rational::{to_f64, ExactRational};

/// Exact pmf of `C_{n,k}` over its full support `1 ..= n - k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPmf {
    pub theta: u32,
    pub n: u64,
    pub k: u64,
    /// `probabilities[r - 1] = P(C_{n,k} = r)`.
    pub probabilities: Vec<ExactRational>,
}

/// Exact first two moments of `C_{n,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMoments {
    pub mean: ExactRational,
    pub variance: ExactRational,
}

/// One exported pmf row.
#[derive(Debug, Clone, Serialize)]
pub struct PmfRow {
    pub r: u64,
    pub num: String,
    pub den: String,
    pub p: f64,
}

impl LocalPmf {
    pub fn support_size(&self) -> usize {
        self.probabilities.len()
    }

    pub fn prob(&self, r: u64) -> ExactRational {
        if r >= 1 && (r as usize) <= self.probabilities.len() {
            self.probabilities[r as usize - 1].clone()
        } else {
            ExactRational::zero()
        }
    }

    pub fn total_mass(&self) -> ExactRational {
        self.probabilities.iter().sum()
    }

    pub fn mean(&self) -> ExactRational {
        let mut acc = ExactRational::zero();
        for (j, p) in self.probabilities.iter().enumerate() {
            acc += p * ExactRational::from_integer(BigInt::from(j as u64 + 1));
        }
        acc
    }

    pub fn variance(&self) -> ExactRational {
        let mean = self.mean();
        let mut acc = ExactRational::zero();
        for (j, p) in self.probabilities.iter().enumerate() {
            let r = ExactRational::from_integer(BigInt::from(j as u64 + 1));
            acc += p * &r * &r;
        }
        acc - &mean * &mean
    }

    pub fn to_floats(&self) -> Vec<f64> {
        self.probabilities.iter().map(to_f64).collect()
    }

    pub fn rows(&self) -> Vec<PmfRow> {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(j, p)| PmfRow {
                r: j as u64 + 1,
                num: p.numer().to_string(),
                den: p.denom().to_string(),
                p: to_f64(p),
            })
            .collect()
    }

    /// CSV form: header plus one `r,num,den,p` row per support point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,num,den,p\n");
        for row in self.rows() {
            out.push_str(&format!("{},{},{},{:.16e}\n", row.r, row.num, row.den, row.p));
        }
        out
    }
}

fn check_labels(n: u64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::Range(format!("vertex label k={k} exceeds age n={n}")));
    }
    Ok(())
}

/// Exact `E[C_{n,k}] = 1 + (theta-1)(H_n(theta-1) - H_k(theta-1))`.
pub fn exact_mean(theta: u32, n: u64, k: u64) -> Result<ExactRational> {
    check_labels(n, k)?;
    let mut acc = ExactRational::one();
    for i in (k + 1)..=n {
        acc += indicator_prob(theta, i);
    }
    Ok(acc)
}

/// Exact `V[C_{n,k}]`: the sum of the Bernoulli variances, equal to
/// `(theta-1)(H_n - H_k) - (theta-1)^2 (H_n^(2) - H_k^(2))` at offset
/// `theta - 1`.
pub fn exact_variance(theta: u32, n: u64, k: u64) -> Result<ExactRational> {
    check_labels(n, k)?;
    let mut acc = ExactRational::zero();
    for i in (k + 1)..=n {
        let p = indicator_prob(theta, i);
        let q = ExactRational::one() - &p;
        acc += p * q;
    }
    Ok(acc)
}

pub fn local_moments(theta: u32, n: u64, k: u64) -> Result<LocalMoments> {
    Ok(LocalMoments {
        mean: exact_mean(theta, n, k)?,
        variance: exact_variance(theta, n, k)?,
    })
}

/// Float mean and variance of `C_{n,k}`, for scales where the exact
/// rational sums are out of reach.
pub fn local_moments_f64(theta: u32, n: u64, k: u64) -> Result<(f64, f64)> {
    check_labels(n, k)?;
    let mut mean = 1.0;
    let mut var = 0.0;
    for i in (k + 1)..=n {
        let p = (theta as f64 - 1.0) / (i as f64 - 1.0 + theta as f64);
        mean += p;
        var += p * (1.0 - p);
    }
    Ok((mean, var))
}

/// Moment generating function of `C_{n,k}`, evaluated as the product over
/// step factors. Accumulates in log space so ages up to 1e7 stay finite.
pub fn mgf(theta: u32, n: u64, k: u64, t: f64) -> Result<f64> {
    check_labels(n, k)?;
    let a = (theta as f64 - 1.0) * t.exp();
    let mut log_acc = t;
    for i in k..n {
        let i = i as f64;
        log_acc += (i + 1.0 + a).ln() - (i + theta as f64).ln();
    }
    Ok(log_acc.exp())
}

/// The same MGF through the Gamma-function representation
/// `e^t Gamma(n+1+a) Gamma(k+theta) / (Gamma(n+theta) Gamma(k+1+a))` with
/// `a = (theta-1) e^t`. Must agree with [`mgf`] to about 1e-10 relative.
pub fn mgf_gamma_form(theta: u32, n: u64, k: u64, t: f64) -> Result<f64> {
    check_labels(n, k)?;
    let a = (theta as f64 - 1.0) * t.exp();
    let log = t + ln_gamma(n as f64 + 1.0 + a) + ln_gamma(k as f64 + theta as f64)
        - ln_gamma(n as f64 + theta as f64)
        - ln_gamma(k as f64 + 1.0 + a);
    Ok(log.exp())
}

/// Exact pmf of `C_{n,k}` from the closed form: with `m = n - k`,
///
/// `P(C = r) = (theta-1)^(r-1) / <k+theta>_m *
///             sum_{i=r-1}^{m} S(m, i) C(i, r-1) (k+1)^(i-r+1)`
///
/// where `S` are signless Stirling numbers of the first kind. The Stirling
/// row, the binomial column, and the `(k+1)`-power ladder are all built
/// incrementally, so total big-integer work stays `O(m^2)`.
pub fn exact_pmf(theta: u32, n: u64, k: u64, table: &StirlingTable) -> Result<LocalPmf> {
    check_labels(n, k)?;
    let m = (n - k) as usize;
    let row = table.row(m).ok_or_else(|| {
        Error::Capacity(format!(
            "pmf needs Stirling row {m}, table holds max_m={} (raise the table cap)",
            table.max_m()
        ))
    })?;

    let kp1 = BigUint::from(k + 1);
    let mut powers = Vec::with_capacity(m + 1);
    powers.push(BigUint::one());
    for t in 1..=m {
        let next = &powers[t - 1] * &kp1;
        powers.push(next);
    }

    let den = BigInt::from(rising_factorial_int(k + theta as u64, m));
    let theta_m1 = BigUint::from(theta as u64 - 1);
    let mut theta_pow = BigUint::one();
    let mut probabilities = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let mut sum = BigUint::zero();
        let mut binom = BigUint::one(); // C(j, j)
        for i in j..=m {
            if i > j {
                // C(i, j) from C(i-1, j)
                binom = binom * BigUint::from(i as u64) / BigUint::from((i - j) as u64);
            }
            sum += &row[i] * &binom * &powers[i - j];
        }
        probabilities.push(ExactRational::new(
            BigInt::from(&theta_pow * sum),
            den.clone(),
        ));
        theta_pow *= &theta_m1;
    }
    Ok(LocalPmf {
        theta,
        n,
        k,
        probabilities,
    })
}

/// Independent oracle for the same law: convolve the step indicators
/// `Bernoulli((theta-1)/(i+theta-1))`, `i = k+1 ..= n`, then shift support
/// by one. No Stirling numbers anywhere on this path.
pub fn pmf_oracle_convolution(theta: u32, n: u64, k: u64) -> Result<LocalPmf> {
    check_labels(n, k)?;
    let mut dp = vec![ExactRational::one()];
    for i in (k + 1)..=n {
        let p = indicator_prob(theta, i);
        let q = ExactRational::one() - &p;
        let mut next = vec![ExactRational::zero(); dp.len() + 1];
        for (successes, mass) in dp.iter().enumerate() {
            next[successes] += mass * &q;
            next[successes + 1] += mass * &p;
        }
        dp = next;
    }
    Ok(LocalPmf {
        theta,
        n,
        k,
        probabilities: dp,
    })
}

/// Float convolution of the same indicator decomposition, support truncated
/// at `support_cap` values. Mass beyond the cap is dropped; pick the cap a
/// comfortable multiple of the mean so the loss is far below 1e-12.
pub fn pmf_float_convolution(theta: u32, n: u64, k: u64, support_cap: usize) -> Result<Vec<f64>> {
    check_labels(n, k)?;
    let mut dp = Vec::with_capacity(support_cap);
    dp.push(1.0f64);
    for i in (k + 1)..=n {
        let p = (theta as f64 - 1.0) / (i as f64 - 1.0 + theta as f64);
        let q = 1.0 - p;
        let len = dp.len();
        if len < support_cap {
            dp.push(0.0);
        }
        // in-place right-to-left update of sum-of-indicator masses
        for j in (0..len).rev() {
            let carry = dp[j] * p;
            dp[j] *= q;
            if j + 1 < dp.len() {
                dp[j + 1] += carry;
            }
        }
    }
    Ok(dp)
}

/// Asymptotic regime for the vertex label `k = k(n)`, declared by the
/// caller: the phases are properties of how `k` scales with `n`, which a
/// single finite pair cannot decide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `k` held fixed as `n` grows.
    FixedK(u64),
    /// `k -> infinity` with `k = o(n)`.
    Early,
    /// `k ~ alpha * n` for `0 < alpha < 1`.
    Intermediate { alpha: f64 },
    /// `k = n - o(n)`.
    Late,
}

impl Regime {
    /// Reject declarations that contradict the concrete `(n, k)` pair.
    pub fn check_consistent(&self, n: u64, k: u64) -> Result<()> {
        match *self {
            Regime::FixedK(expected) => {
                if expected != k {
                    return Err(Error::Regime(format!(
                        "regime fixes k={expected}, got k={k}"
                    )));
                }
            }
            Regime::Early => {
                if k == 0 {
                    return Err(Error::Regime(
                        "early regime needs a growing k; use the fixed-k regime for k=0".into(),
                    ));
                }
            }
            Regime::Intermediate { alpha } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::Regime(format!(
                        "intermediate regime needs 0 < alpha < 1, got {alpha}"
                    )));
                }
                let expected = (alpha * n as f64).round() as u64;
                if expected != k {
                    return Err(Error::Regime(format!(
                        "k={k} is not round(alpha*n)={expected} for alpha={alpha}"
                    )));
                }
            }
            Regime::Late => {}
        }
        if k > n {
            return Err(Error::Regime(format!("k={k} exceeds n={n}")));
        }
        Ok(())
    }
}

/// Leading-plus-constant approximation of `E[C_{n,k}]` in the declared
/// regime.
pub fn asymptotic_mean(theta: u32, n: u64, k: u64, regime: Regime) -> Result<f64> {
    regime.check_consistent(n, k)?;
    let tm1 = theta as f64 - 1.0;
    match regime {
        Regime::FixedK(_) => {
            let mut harmonic_k = 0.0;
            for j in 1..=k {
                harmonic_k += 1.0 / (j as f64 + tm1);
            }
            Ok(tm1 * ((n as f64).ln() - digamma(tm1)? - 1.0 / tm1) + 1.0 - tm1 * harmonic_k)
        }
        Regime::Early => Ok(tm1 * (n as f64 / k as f64).ln() + 1.0),
        Regime::Intermediate { alpha } => Ok(1.0 + tm1 * (1.0 / alpha).ln()),
        Regime::Late => Ok(1.0),
    }
}

/// Limit law of `C_{n,k}` in one asymptotic regime, with its centering and
/// scale descriptors.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    Normal {
        variance: f64,
        centering: String,
        scale: String,
    },
    ShiftedPoisson {
        shift: u32,
        rate: f64,
    },
    PointMass {
        value: u32,
    },
}

pub fn limit_law(regime: Regime, theta: u32) -> Result<LimitLaw> {
    if theta < 2 {
        return Err(Error::Parameter("theta must be >= 2".into()));
    }
    let tm1 = theta as f64 - 1.0;
    Ok(match regime {
        Regime::FixedK(_) => LimitLaw::Normal {
            variance: tm1,
            centering: format!("{}*ln(n)", theta - 1),
            scale: "sqrt(ln(n))".into(),
        },
        Regime::Early => LimitLaw::Normal {
            variance: tm1,
            centering: format!("{}*ln(n/k)", theta - 1),
            scale: "sqrt(ln(n/k))".into(),
        },
        Regime::Intermediate { alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Regime(format!(
                    "intermediate regime needs 0 < alpha < 1, got {alpha}"
                )));
            }
            LimitLaw::ShiftedPoisson {
                shift: 1,
                rate: tm1 * (1.0 / alpha).ln(),
            }
        }
        Regime::Late => LimitLaw::PointMass { value: 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, one, ratio, zero};
    use proptest::prelude::*;

    #[test]
    fn mean_examples() {
        assert_eq!(exact_mean(4, 9, 9).unwrap(), one());
        // 1 + 2/3 + 1/2, the two indicator probabilities after vertex 0
        assert_eq!(exact_mean(3, 2, 0).unwrap(), ratio(13, 6));
        assert_eq!(exact_mean(2, 2, 1).unwrap(), ratio(4, 3));
        assert!(exact_mean(2, 3, 4).is_err());
    }

    #[test]
    fn variance_examples() {
        assert_eq!(exact_variance(3, 7, 7).unwrap(), zero());
        // Bernoulli(1/3) variance
        assert_eq!(exact_variance(2, 2, 1).unwrap(), ratio(2, 9));
        // 2/3 * 1/3 + 1/2 * 1/2
        assert_eq!(exact_variance(3, 2, 0).unwrap(), ratio(17, 36));
    }

    #[test]
    fn variance_matches_harmonic_form() {
        use crate::combinatorics::gen_harmonic;
        for theta in 2u32..=5 {
            let x = int(theta as i64 - 1);
            for n in 0u64..=14 {
                for k in 0..=n {
                    let h1 = gen_harmonic(n, 1, &x).unwrap() - gen_harmonic(k, 1, &x).unwrap();
                    let h2 = gen_harmonic(n, 2, &x).unwrap() - gen_harmonic(k, 2, &x).unwrap();
                    let tm1 = int(theta as i64 - 1);
                    let want = &tm1 * h1 - &tm1 * &tm1 * h2;
                    assert_eq!(exact_variance(theta, n, k).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn mgf_boundary_values() {
        assert!((mgf(3, 50, 4, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let t = 0.7;
        assert!((mgf(4, 6, 6, t).unwrap() - t.exp()).abs() < 1e-12);
    }

    #[test]
    fn mgf_log_derivative_matches_mean() {
        let h = 1e-5;
        let up = mgf(3, 100, 5, h).unwrap().ln();
        let down = mgf(3, 100, 5, -h).unwrap().ln();
        let numeric = (up - down) / (2.0 * h);
        let exact = to_f64(&exact_mean(3, 100, 5).unwrap());
        assert!((numeric - exact).abs() < 1e-6, "{numeric} vs {exact}");
    }

    #[test]
    fn mgf_product_and_gamma_forms_agree() {
        for theta in 2u32..=5 {
            for &n in &[10u64, 100, 1000] {
                for &k in &[0u64, 1, n / 2, n] {
                    for &t in &[-2.0, -1.0, -0.1, 0.1, 1.0, 2.0] {
                        let prod = mgf(theta, n, k, t).unwrap();
                        let gamma = mgf_gamma_form(theta, n, k, t).unwrap();
                        let rel = (prod / gamma - 1.0).abs();
                        assert!(rel < 1e-10, "theta={theta} n={n} k={k} t={t}: rel={rel:.2e}");
                    }
                }
            }
        }
    }

    #[test]
    fn pmf_point_mass_at_boundary() {
        let table = StirlingTable::new(0);
        let pmf = exact_pmf(5, 12, 12, &table).unwrap();
        assert_eq!(pmf.probabilities, vec![one()]);
        let oracle = pmf_oracle_convolution(5, 12, 12).unwrap();
        assert_eq!(oracle.probabilities, vec![one()]);
    }

    #[test]
    fn pmf_hand_case_theta2() {
        // single Bernoulli(1/3) shifted by one; the closed form reduces to
        // <3>_1 = 3 with Stirling row {0, 1}
        let table = StirlingTable::new(1);
        let pmf = exact_pmf(2, 2, 1, &table).unwrap();
        assert_eq!(pmf.probabilities, vec![ratio(2, 3), ratio(1, 3)]);
    }

    #[test]
    fn convolution_hand_case() {
        let pmf = pmf_oracle_convolution(2, 3, 1).unwrap();
        assert_eq!(
            pmf.probabilities,
            vec![ratio(1, 2), ratio(5, 12), ratio(1, 12)]
        );
    }

    #[test]
    fn pmf_matches_convolution_oracle() {
        let table = StirlingTable::new(12);
        for theta in [2u32, 3, 4] {
            for k in [0u64, 1, 5] {
                for m in 0u64..=10 {
                    let n = k + m;
                    let exact = exact_pmf(theta, n, k, &table).unwrap();
                    let oracle = pmf_oracle_convolution(theta, n, k).unwrap();
                    assert_eq!(
                        exact.probabilities, oracle.probabilities,
                        "theta={theta} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn pmf_normalizes_and_matches_moments() {
        let table = StirlingTable::new(25);
        for theta in [2u32, 3, 5] {
            for n in 0u64..=25 {
                for k in 0..=n {
                    let pmf = exact_pmf(theta, n, k, &table).unwrap();
                    assert_eq!(pmf.total_mass(), one(), "theta={theta} n={n} k={k}");
                    assert_eq!(pmf.mean(), exact_mean(theta, n, k).unwrap());
                    assert_eq!(pmf.variance(), exact_variance(theta, n, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn convolution_mean_identity_sweep() {
        for theta in 2u32..=5 {
            for n in 0u64..=40 {
                for k in (0..=n).step_by(7) {
                    let pmf = pmf_oracle_convolution(theta, n, k).unwrap();
                    assert_eq!(pmf.mean(), exact_mean(theta, n, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn tail_entry_is_the_all_success_product() {
        let table = StirlingTable::new(9);
        for theta in [2u32, 3, 4] {
            let (n, k) = (12u64, 3u64);
            let pmf = exact_pmf(theta, n, k, &table).unwrap();
            let mut product = one();
            for i in (k + 1)..=n {
                product *= indicator_prob(theta, i);
            }
            assert_eq!(pmf.prob(n - k + 1), product);
            assert!(pmf.probabilities.iter().all(|p| p > &zero()));
        }
    }

    #[test]
    fn pmf_capacity_error_when_row_missing() {
        let table = StirlingTable::new(4);
        match exact_pmf(3, 20, 1, &table) {
            Err(Error::Capacity(_)) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn pgf_link() {
        let table = StirlingTable::new(8);
        for &u in &[0.5f64, 1.5] {
            for theta in [2u32, 3] {
                let pmf = exact_pmf(theta, 9, 1, &table).unwrap();
                let direct: f64 = pmf
                    .to_floats()
                    .iter()
                    .enumerate()
                    .map(|(j, p)| p * u.powi(j as i32 + 1))
                    .sum();
                let via_mgf = mgf(theta, 9, 1, u.ln()).unwrap();
                assert!((direct - via_mgf).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn float_convolution_tracks_exact() {
        let exact = pmf_oracle_convolution(3, 40, 10).unwrap();
        let float = pmf_float_convolution(3, 40, 10, 64).unwrap();
        for (j, p) in exact.to_floats().iter().enumerate() {
            assert!((float[j] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_mean_fixed_k_band() {
        // theta = 2, k = 0: the approximation sits within the O(1/n) band
        let n = 1_000_000u64;
        let (exact, _) = local_moments_f64(2, n, 0).unwrap();
        let approx = asymptotic_mean(2, n, 0, Regime::FixedK(0)).unwrap();
        assert!((approx - exact).abs() < 2e-6, "gap {}", approx - exact);
    }

    #[test]
    fn asymptotic_mean_early_band() {
        let n = 1_000_000u64;
        let k = (n as f64).powf(0.75).ceil() as u64;
        let (exact, _) = local_moments_f64(3, n, k).unwrap();
        let approx = asymptotic_mean(3, n, k, Regime::Early).unwrap();
        assert!(
            (approx - exact).abs() < 6.0 / k as f64,
            "gap {}",
            approx - exact
        );
    }

    #[test]
    fn asymptotic_mean_late_and_intermediate_limits() {
        assert_eq!(asymptotic_mean(4, 100, 100, Regime::Late).unwrap(), 1.0);
        assert_eq!(exact_mean(4, 100, 100).unwrap(), one());
        let near_one = asymptotic_mean(
            3,
            1000,
            999,
            Regime::Intermediate { alpha: 0.999 },
        )
        .unwrap();
        assert!((near_one - 1.0).abs() < 0.01);
    }

    #[test]
    fn regime_consistency_checks() {
        assert!(Regime::FixedK(3).check_consistent(100, 4).is_err());
        assert!(Regime::Intermediate { alpha: 0.5 }
            .check_consistent(100, 50)
            .is_ok());
        assert!(Regime::Intermediate { alpha: 0.5 }
            .check_consistent(100, 60)
            .is_err());
        assert!(Regime::Intermediate { alpha: 1.5 }
            .check_consistent(100, 60)
            .is_err());
        assert!(Regime::Early.check_consistent(100, 0).is_err());
    }

    #[test]
    fn limit_law_examples() {
        match limit_law(Regime::Intermediate { alpha: 0.5 }, 3).unwrap() {
            LimitLaw::ShiftedPoisson { shift, rate } => {
                assert_eq!(shift, 1);
                assert!((rate - 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
            }
            other => panic!("unexpected law {other:?}"),
        }
        assert_eq!(
            limit_law(Regime::Late, 4).unwrap(),
            LimitLaw::PointMass { value: 1 }
        );
        match limit_law(Regime::FixedK(0), 2).unwrap() {
            LimitLaw::Normal { variance, .. } => assert_eq!(variance, 1.0),
            other => panic!("unexpected law {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn pmf_normalization_property(theta in 2u32..6, n in 0u64..18, k_frac in 0.0f64..1.0) {
            let k = (k_frac * n as f64).floor() as u64;
            let table = StirlingTable::new((n - k) as usize);
            let pmf = exact_pmf(theta, n, k, &table).unwrap();
            prop_assert_eq!(pmf.total_mass(), one());
            prop_assert_eq!(pmf.mean(), exact_mean(theta, n, k).unwrap());
        }
    }
}
