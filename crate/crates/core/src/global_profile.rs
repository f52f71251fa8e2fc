//! Exact analysis of the global containment profile `(X_{n,1}, X_{n,2})`:
//! closed-form and recurrence means, exact second-moment recurrences,
//! covariance limits, the martingale transform `M_n = r_n X_{n,1} + s_n`,
//! per-step conditional variance, and the CLT parameters for `X_{n,1}`.
//!
//! The second-moment recurrences are iterated in their exact
//! pre-asymptotic form, with exact lower moments substituted, so every
//! value here can be compared to the DP oracle by rational equality. A
//! float iteration of the same recurrences covers the scales (up to 1e7)
//! where rationals are impractical; it exists for convergence checks
//! against the limit matrix, not for exact results.

use num_traits::{One, Zero};

use crate::combinatorics::{factorial, gamma_ratio_int, gen_harmonic};
use crate::error::{Error, Result};
use crate::growth::TreeState;
use crate::rational::{from_biguint, int, ratio, ExactRational};

/// Exact joint moments of `(X_{n,1}, X_{n,2})` at one age.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalMoments {
    pub theta: u32,
    pub n: u64,
    pub e1: ExactRational,
    pub e2: ExactRational,
    pub e11: ExactRational,
    pub e12: ExactRational,
    pub e22: ExactRational,
}

impl GlobalMoments {
    pub fn var1(&self) -> ExactRational {
        &self.e11 - &self.e1 * &self.e1
    }

    pub fn cov12(&self) -> ExactRational {
        &self.e12 - &self.e1 * &self.e2
    }

    pub fn var2(&self) -> ExactRational {
        &self.e22 - &self.e2 * &self.e2
    }
}

/// Covariance matrix entries for `(X_{n,1}, X_{n,2})`. `scaled` is false
/// for the raw per-age matrix and true for the limit of `Sigma_n / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    pub var1: ExactRational,
    pub cov12: ExactRational,
    pub var2: ExactRational,
    pub scaled: bool,
}

/// Float image of a covariance matrix, from the float-iterated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMatrixF64 {
    pub var1: f64,
    pub cov12: f64,
    pub var2: f64,
}

/// The deterministic factors that make `M_n = r_n X_{n,1} + s_n` a
/// martingale: `r_n = Gamma(n+theta) / (Gamma(theta) Gamma(n+1))` and
/// `s_n = 1 - Gamma(n+theta+1) / (theta Gamma(theta) Gamma(n+1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleFactors {
    pub n: u64,
    pub r: ExactRational,
    pub s: ExactRational,
}

/// Centering, scale and limit variance for the Gaussian law of `X_{n,1}`,
/// plus the conditional-variance-sum normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct CltParams {
    pub theta: u32,
    /// Variance of the limit of `(X_{n,1} - n/theta) / sqrt(n)`.
    pub limit_variance: ExactRational,
    /// Limit of the conditional variance sum scaled by `n^{2 theta - 1}`;
    /// equals `limit_variance / Gamma(theta)^2`.
    pub vn_limit: ExactRational,
}

impl CltParams {
    pub fn centering(&self, n: u64) -> f64 {
        n as f64 / self.theta as f64
    }

    pub fn scale(&self, n: u64) -> f64 {
        (n as f64).sqrt()
    }

    /// `n^{theta - 1/2}`, the martingale normalization.
    pub fn vn_scale(&self, n: u64) -> f64 {
        (n as f64).powf(self.theta as f64 - 0.5)
    }
}

fn check_theta(theta: u32) -> Result<()> {
    if theta < 2 {
        return Err(Error::Parameter(format!(
            "hyperedge size theta must be >= 2, got {theta}"
        )));
    }
    Ok(())
}

/// Closed-form mean vector `(E[X_{n,1}], E[X_{n,2}])`.
pub fn mean_closed_form(theta: u32, n: u64) -> Result<(ExactRational, ExactRational)> {
    check_theta(theta)?;
    let t = theta as i64;
    let gamma_theta = from_biguint(factorial(theta as u64 - 1));
    // Gamma(n+1) / Gamma(n+theta)
    let falling = gamma_ratio_int(n, 1, t)?;
    let e1 = ratio(n as i64, t) + int(1) + int(t - 1) * &gamma_theta * &falling;
    let h_n = gen_harmonic(n, 1, &int(0))?;
    let e2 = ratio(t - 1, t * t) * int(n as i64 + t)
        + &gamma_theta * &falling * (int((t - 1) * (t - 1)) * h_n - ratio(t - 1, t));
    Ok((e1, e2))
}

/// The same mean vector by iterating the exact one-step recurrences from
/// `(theta, 0)`. Must agree with [`mean_closed_form`] rationally.
pub fn mean_recurrence(theta: u32, n: u64) -> Result<(ExactRational, ExactRational)> {
    check_theta(theta)?;
    let mut e1 = int(theta as i64);
    let mut e2 = int(0);
    for step in 1..=n {
        let shrink = ratio(step as i64, step as i64 + theta as i64 - 1);
        let recruit = ratio(theta as i64 - 1, step as i64 + theta as i64 - 1);
        let new_e1 = &shrink * &e1 + int(1);
        let new_e2 = &shrink * &e2 + &recruit * &e1;
        e1 = new_e1;
        e2 = new_e2;
    }
    Ok((e1, e2))
}

struct MomentState {
    e1: ExactRational,
    e2: ExactRational,
    e11: ExactRational,
    e12: ExactRational,
    e22: ExactRational,
}

impl MomentState {
    fn initial(theta: u32) -> Self {
        MomentState {
            e1: int(theta as i64),
            e2: int(0),
            e11: int((theta as i64) * (theta as i64)),
            e12: int(0),
            e22: int(0),
        }
    }

    /// One exact step of the five coupled moment recurrences, from age
    /// `step - 1` to age `step`.
    fn advance(&mut self, theta: u32, step: u64) {
        let t = theta as i64;
        let s = step as i64;
        let d1 = s + t - 1; // n + theta - 1
        let d2 = s + t - 2; // n + theta - 2
        let g = ratio(s * (s - 1), d1 * d2);
        let mean_c = ratio(s * (2 * s + 3 * t - 5), d1 * d2);
        let lin12 = ratio(s, d1);
        let quad12 = ratio(s * (t - 1), d1 * d2);
        let tail = ratio((t - 1) * (t - 2), d1 * d2);
        let pair22 = ratio(2 * s * (t - 1), d1 * d2);

        let e11 = &g * &self.e11 + &mean_c * &self.e1 + int(1);
        let e12 = &g * &self.e12 + &lin12 * &self.e2 + &quad12 * &self.e11 + &tail * &self.e1;
        let e22 = &g * &self.e22
            + &tail * &self.e11
            + &pair22 * &self.e12
            + &quad12 * (&self.e1 + &self.e2);

        let shrink = ratio(s, d1);
        let recruit = ratio(t - 1, d1);
        let e1 = &shrink * &self.e1 + int(1);
        let e2 = &shrink * &self.e2 + &recruit * &self.e1;

        self.e1 = e1;
        self.e2 = e2;
        self.e11 = e11;
        self.e12 = e12;
        self.e22 = e22;
    }
}

/// Exact second moments `(E[X1^2], E[X1 X2], E[X2^2])` together with the
/// means, iterated from the deterministic age-0 state.
pub fn second_moments_recurrence(theta: u32, n: u64) -> Result<GlobalMoments> {
    check_theta(theta)?;
    let mut state = MomentState::initial(theta);
    for step in 1..=n {
        state.advance(theta, step);
    }
    Ok(GlobalMoments {
        theta,
        n,
        e1: state.e1,
        e2: state.e2,
        e11: state.e11,
        e12: state.e12,
        e22: state.e22,
    })
}

/// Exact covariance matrix of `(X_{n,1}, X_{n,2})` at age `n`.
pub fn exact_cov(theta: u32, n: u64) -> Result<CovMatrix> {
    let moments = second_moments_recurrence(theta, n)?;
    Ok(CovMatrix {
        var1: moments.var1(),
        cov12: moments.cov12(),
        var2: moments.var2(),
        scaled: false,
    })
}

/// Limit of `Sigma_n / n` as exact rational functions of theta.
pub fn asymptotic_cov(theta: u32) -> Result<CovMatrix> {
    check_theta(theta)?;
    let t = theta as i64;
    let tm1sq = (t - 1) * (t - 1);
    let two_t = 2 * t - 1;
    Ok(CovMatrix {
        var1: ratio(tm1sq, t * t * two_t),
        cov12: -ratio(tm1sq * (t * t + 2 * t - 1), t * t * t * two_t * two_t),
        var2: ratio(
            tm1sq * (6 * t * t * t * t - 6 * t * t * t + 8 * t * t - 5 * t + 1),
            t * t * t * t * two_t * two_t * two_t,
        ),
        scaled: true,
    })
}

/// Float iteration of the exact moment recurrences; the only route that
/// reaches ages around 1e7 where rationals would blow up.
pub fn cov_float_iterated(theta: u32, n: u64) -> Result<CovMatrixF64> {
    check_theta(theta)?;
    let t = theta as f64;
    let mut e1 = t;
    let mut e2 = 0.0;
    let mut e11 = t * t;
    let mut e12 = 0.0;
    let mut e22 = 0.0;
    for step in 1..=n {
        let s = step as f64;
        let d1 = s + t - 1.0;
        let d2 = s + t - 2.0;
        let g = s * (s - 1.0) / (d1 * d2);
        let mean_c = s * (2.0 * s + 3.0 * t - 5.0) / (d1 * d2);
        let lin12 = s / d1;
        let quad12 = s * (t - 1.0) / (d1 * d2);
        let tail = (t - 1.0) * (t - 2.0) / (d1 * d2);
        let pair22 = 2.0 * s * (t - 1.0) / (d1 * d2);

        let n11 = g * e11 + mean_c * e1 + 1.0;
        let n12 = g * e12 + lin12 * e2 + quad12 * e11 + tail * e1;
        let n22 = g * e22 + tail * e11 + pair22 * e12 + quad12 * (e1 + e2);
        let n1 = s / d1 * e1 + 1.0;
        let n2 = s / d1 * e2 + (t - 1.0) / d1 * e1;
        e1 = n1;
        e2 = n2;
        e11 = n11;
        e12 = n12;
        e22 = n22;
    }
    Ok(CovMatrixF64 {
        var1: e11 - e1 * e1,
        cov12: e12 - e1 * e2,
        var2: e22 - e2 * e2,
    })
}

/// Exact martingale factors at age `n`, from the closed Gamma-ratio forms.
pub fn martingale_factors(theta: u32, n: u64) -> Result<MartingaleFactors> {
    check_theta(theta)?;
    let t = theta as i64;
    let gamma_theta = from_biguint(factorial(theta as u64 - 1));
    // Gamma(n+theta) / Gamma(n+1)
    let r = gamma_ratio_int(n, t, 1)? / &gamma_theta;
    let s = ExactRational::one()
        - gamma_ratio_int(n, t + 1, 1)? / (int(t) * &gamma_theta);
    Ok(MartingaleFactors { n, r, s })
}

/// `M_n = r_n X_{n,1} + s_n` evaluated on a concrete tree state.
pub fn martingale_value(state: &TreeState) -> Result<ExactRational> {
    let factors = martingale_factors(state.theta, state.age)?;
    let (x1, _) = state.x1_x2();
    Ok(&factors.r * int(x1 as i64) + &factors.s)
}

/// Exact conditional variance of the next martingale increment,
/// `E[(M_{j} - M_{j-1})^2 | state]` for `j = age + 1`, from the
/// hypergeometric moments of the recruited level-1 count. No simulation.
pub fn conditional_variance_term(state: &TreeState) -> Result<ExactRational> {
    let theta = state.theta;
    let j = state.age + 1;
    let tau = int(state.vertex_count() as i64);
    let (x1_raw, _) = state.x1_x2();
    let x1 = int(x1_raw as i64);
    let sample = int(theta as i64 - 1);

    let prev = martingale_factors(theta, j - 1)?;
    let cur = martingale_factors(theta, j)?;
    let dr = &cur.r - &prev.r;

    // Q ~ Hypergeo(tau, x1; theta - 1)
    let eq = &x1 * &sample / &tau;
    let tau_m1 = &tau - int(1);
    let var_q = if tau_m1.is_zero() {
        ExactRational::zero()
    } else {
        &x1 * (&tau - &x1) * (&tau - &sample) * &sample / (&tau * &tau * &tau_m1)
    };
    let eq2 = var_q + &eq * &eq;

    // grad M_j = dr * X1 - r_j * Q  (the r_j and grad s_j point terms cancel)
    let term = &dr * &dr * &x1 * &x1 - int(2) * &dr * &x1 * &cur.r * &eq
        + &cur.r * &cur.r * eq2;
    Ok(term)
}

/// Expected conditional variance sum `E[V_n]` scaled by `n^{-(2 theta - 1)}`,
/// accumulated exactly along the moment recurrences.
pub fn expected_vn_exact(theta: u32, n: u64) -> Result<ExactRational> {
    check_theta(theta)?;
    if n == 0 {
        return Err(Error::Parameter("V_n needs n >= 1".into()));
    }
    let t = theta as i64;
    let mut state = MomentState::initial(theta);
    let mut r_prev = ExactRational::one();
    let mut acc = ExactRational::zero();
    for j in 1..=n {
        let r_cur = &r_prev * ratio(j as i64 + t - 1, j as i64);
        let dr = &r_cur - &r_prev;
        let tau = int(j as i64 + t - 1);
        let tau_m1 = int(j as i64 + t - 2);
        let sample = int(t - 1);
        // alpha * E[X1^2] + beta * E[X1], the conditional expectation of
        // (grad M_j)^2 averaged over the age j-1 distribution
        let alpha = &dr * &dr - int(2) * &dr * &r_cur * &sample / &tau
            + &r_cur * &r_cur
                * (&sample * &sample / (&tau * &tau)
                    - &sample * int(j as i64) / (&tau * &tau * &tau_m1));
        let beta = &r_cur * &r_cur * &sample * int(j as i64) / (&tau * &tau_m1);
        acc += alpha * &state.e11 + beta * &state.e1;
        state.advance(theta, j);
        r_prev = r_cur;
    }
    let scale = int(n as i64).pow(2 * theta as i32 - 1);
    Ok(acc / scale)
}

/// Float version of [`expected_vn_exact`] for large `n`.
pub fn expected_vn_f64(theta: u32, n: u64) -> Result<f64> {
    check_theta(theta)?;
    if n == 0 {
        return Err(Error::Parameter("V_n needs n >= 1".into()));
    }
    let t = theta as f64;
    let mut e1 = t;
    let mut e11 = t * t;
    let mut r_prev = 1.0f64;
    let mut acc = 0.0f64;
    for j in 1..=n {
        let jf = j as f64;
        let r_cur = r_prev * (jf + t - 1.0) / jf;
        let dr = r_cur - r_prev;
        let tau = jf + t - 1.0;
        let sample = t - 1.0;
        let alpha = dr * dr - 2.0 * dr * r_cur * sample / tau
            + r_cur * r_cur * (sample * sample / (tau * tau) - sample * jf / (tau * tau * (tau - 1.0)));
        let beta = r_cur * r_cur * sample * jf / (tau * (tau - 1.0));
        acc += alpha * e11 + beta * e1;

        let d1 = jf + t - 1.0;
        let d2 = jf + t - 2.0;
        let g = jf * (jf - 1.0) / (d1 * d2);
        let mean_c = jf * (2.0 * jf + 3.0 * t - 5.0) / (d1 * d2);
        let n11 = g * e11 + mean_c * e1 + 1.0;
        e1 = jf / d1 * e1 + 1.0;
        e11 = n11;
        r_prev = r_cur;
    }
    Ok(acc / (n as f64).powi(2 * theta as i32 - 1))
}

/// CLT descriptors for `X_{n,1}`: centering `n/theta`, scale `sqrt(n)`,
/// limit variance `(theta-1)^2 / (theta^2 (2 theta - 1))`, and the
/// conditional-variance-sum limit, which divides by `Gamma(theta)^2`.
pub fn clt_params(theta: u32) -> Result<CltParams> {
    check_theta(theta)?;
    let limit_variance = asymptotic_cov(theta)?.var1;
    let gamma_theta = from_biguint(factorial(theta as u64 - 1));
    let vn_limit = &limit_variance / (&gamma_theta * &gamma_theta);
    Ok(CltParams {
        theta,
        limit_variance,
        vn_limit,
    })
}
