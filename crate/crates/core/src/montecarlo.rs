//! Seeded Monte Carlo harness and statistical verdicts.
//!
//! Replicates are embarrassingly parallel: replicate `i` always draws from
//! ChaCha stream `i` of the master seed, results are collected in
//! replicate order, and aggregation happens sequentially, so a run is
//! bit-identical no matter how many threads execute it.
//!
//! Verdicts are loose by design (p-gates at 1e-3, moment bands of a few
//! standard errors) so that fixed-seed CI runs stay deterministic without
//! becoming blind: the gates are sized to hold across most seeds while
//! still catching real distributional bugs.

pub mod stats;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::global_profile::{martingale_factors, martingale_value};
use crate::growth::{replicate_rng, DrawSource, TreeState};
use crate::oracle::hypergeom_pmf;
use crate::rational::{int, to_f64, ExactRational};

/// Parameters of one simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub theta: u32,
    pub n: u64,
    pub replicates: u64,
    pub master_seed: u64,
    /// Vertex label whose containment the local mode tracks.
    pub tracked_vertex: Option<u64>,
    pub record_martingale: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta < 2 {
            return Err(Error::Parameter("theta must be >= 2".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Parameter("replicates must be >= 1".into()));
        }
        if let Some(k) = self.tracked_vertex {
            if k > self.n {
                return Err(Error::Parameter(format!(
                    "tracked vertex {k} will not exist at age {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one verification: a statistic plus either a p-value (for
/// statistical gates) or an exact pass flag (for rational-equality and
/// tolerance checks), and the provenance of the reference values.
#[derive(Debug, Clone, Serialize)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dof: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_pass: Option<bool>,
    pub pass: bool,
    pub reference: String,
}

impl TestReport {
    pub fn statistical(
        name: &str,
        statistic: f64,
        dof: Option<u64>,
        p_value: f64,
        p_gate: f64,
        reference: &str,
    ) -> Self {
        TestReport {
            name: name.into(),
            statistic,
            dof,
            p_value: Some(p_value),
            exact_pass: None,
            pass: p_value > p_gate,
            reference: reference.into(),
        }
    }

    pub fn exact(name: &str, statistic: f64, pass: bool, reference: &str) -> Self {
        TestReport {
            name: name.into(),
            statistic,
            dof: None,
            p_value: None,
            exact_pass: Some(pass),
            pass,
            reference: reference.into(),
        }
    }

    pub fn csv_header() -> &'static str {
        "name,statistic,dof,p,pass"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:.16e},{},{},{}",
            self.name,
            self.statistic,
            self.dof.map(|d| d.to_string()).unwrap_or_default(),
            self.p_value.map(|p| format!("{p:.16e}")).unwrap_or_default(),
            self.pass
        )
    }
}

/// Per-replicate containment samples of one tracked vertex.
#[derive(Debug, Clone)]
pub struct LocalRun {
    pub theta: u32,
    pub n: u64,
    pub k: u64,
    pub replicates: u64,
    /// `values[i]` is the sampled `C_{n,k}` of replicate `i`.
    pub values: Vec<u32>,
}

impl LocalRun {
    /// Histogram over the full support `1 ..= n - k + 1`.
    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; (self.n - self.k + 1) as usize];
        for &v in &self.values {
            counts[v as usize - 1] += 1;
        }
        counts
    }

    pub fn sample_mean(&self) -> f64 {
        self.values.iter().map(|&v| v as f64).sum::<f64>() / self.values.len() as f64
    }
}

/// Sample the law of `C_{n,k}` by drawing the independent step indicators
/// directly, one Bernoulli per step after the vertex joins, instead of
/// growing a full tree.
pub fn run_local(config: &SimConfig) -> Result<LocalRun> {
    config.validate()?;
    let k = config
        .tracked_vertex
        .ok_or_else(|| Error::Parameter("local mode needs a tracked vertex label".into()))?;
    let (theta, n) = (config.theta, config.n);
    let probs: Vec<f64> = ((k + 1)..=n)
        .map(|i| (theta as f64 - 1.0) / (i as f64 - 1.0 + theta as f64))
        .collect();
    let values: Vec<u32> = (0..config.replicates)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(config.master_seed, rep);
            let mut c = 1u32;
            for &p in &probs {
                if rng.random::<f64>() < p {
                    c += 1;
                }
            }
            c
        })
        .collect();
    Ok(LocalRun {
        theta,
        n,
        k,
        replicates: config.replicates,
        values,
    })
}

/// The same tracked-vertex sampling, but through full tree growth; used to
/// validate the indicator decomposition against the state machine itself.
pub fn run_local_full_tree(config: &SimConfig) -> Result<LocalRun> {
    config.validate()?;
    let k = config
        .tracked_vertex
        .ok_or_else(|| Error::Parameter("local mode needs a tracked vertex label".into()))?;
    let values: Vec<u32> = (0..config.replicates)
        .into_par_iter()
        .map(|rep| {
            let mut state = TreeState::init(config.theta).expect("validated theta");
            let mut draws = DrawSource::seeded_stream(config.master_seed, rep);
            state
                .grow_many(config.n, &mut draws)
                .expect("seeded draws cannot fail");
            state.containment_of(k).expect("k <= n was validated")
        })
        .collect();
    Ok(LocalRun {
        theta: config.theta,
        n: config.n,
        k,
        replicates: config.replicates,
        values,
    })
}

/// Per-replicate global profile samples.
#[derive(Debug, Clone)]
pub struct GlobalRun {
    pub theta: u32,
    pub n: u64,
    pub replicates: u64,
    pub x1: Vec<u32>,
    pub x2: Vec<u32>,
    /// Martingale value per replicate (float rendering of the exact
    /// transform), when requested.
    pub martingale: Option<Vec<f64>>,
}

impl GlobalRun {
    pub fn mean_x1(&self) -> f64 {
        self.x1.iter().map(|&v| v as f64).sum::<f64>() / self.x1.len() as f64
    }

    pub fn mean_x2(&self) -> f64 {
        self.x2.iter().map(|&v| v as f64).sum::<f64>() / self.x2.len() as f64
    }

    pub fn var_x1(&self) -> f64 {
        let xs: Vec<f64> = self.x1.iter().map(|&v| v as f64).collect();
        stats::sample_moments(&xs).variance
    }

    pub fn var_x2(&self) -> f64 {
        let xs: Vec<f64> = self.x2.iter().map(|&v| v as f64).collect();
        stats::sample_moments(&xs).variance
    }

    /// Unbiased sample covariance of the two level counts.
    pub fn cov_x1_x2(&self) -> f64 {
        let n = self.x1.len() as f64;
        let m1 = self.mean_x1();
        let m2 = self.mean_x2();
        let acc: f64 = self
            .x1
            .iter()
            .zip(&self.x2)
            .map(|(&a, &b)| (a as f64 - m1) * (b as f64 - m2))
            .sum();
        acc / (n - 1.0)
    }
}

/// Grow full trees and record `(X_{n,1}, X_{n,2})` per replicate.
pub fn run_global(config: &SimConfig) -> Result<GlobalRun> {
    config.validate()?;
    let (r_f, s_f) = if config.record_martingale {
        let f = martingale_factors(config.theta, config.n)?;
        (to_f64(&f.r), to_f64(&f.s))
    } else {
        (0.0, 0.0)
    };
    let rows: Vec<(u32, u32)> = (0..config.replicates)
        .into_par_iter()
        .map(|rep| {
            let mut state = TreeState::init(config.theta).expect("validated theta");
            let mut draws = DrawSource::seeded_stream(config.master_seed, rep);
            state
                .grow_many(config.n, &mut draws)
                .expect("seeded draws cannot fail");
            let (x1, x2) = state.x1_x2();
            (x1 as u32, x2 as u32)
        })
        .collect();
    let x1: Vec<u32> = rows.iter().map(|r| r.0).collect();
    let x2: Vec<u32> = rows.iter().map(|r| r.1).collect();
    let martingale = config
        .record_martingale
        .then(|| x1.iter().map(|&v| r_f * v as f64 + s_f).collect());
    Ok(GlobalRun {
        theta: config.theta,
        n: config.n,
        replicates: config.replicates,
        x1,
        x2,
        martingale,
    })
}

/// Pearson goodness-of-fit of observed counts against exact cell
/// probabilities. Adjacent cells are merged until every merged cell has
/// expected count at least 5; the p-value is the chi-square upper tail.
pub fn chi_square_gof(
    name: &str,
    counts: &[u64],
    probs: &[f64],
    p_gate: f64,
    reference: &str,
) -> Result<TestReport> {
    if counts.len() != probs.len() {
        return Err(Error::Parameter(format!(
            "{} observed cells vs {} probability cells",
            counts.len(),
            probs.len()
        )));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::DegenerateTest("no observations".into()));
    }
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut obs_acc = 0.0;
    let mut exp_acc = 0.0;
    for (&c, &p) in counts.iter().zip(probs) {
        obs_acc += c as f64;
        exp_acc += p * total as f64;
        if exp_acc >= 5.0 {
            bins.push((obs_acc, exp_acc));
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    if obs_acc > 0.0 || exp_acc > 0.0 {
        if let Some(last) = bins.last_mut() {
            last.0 += obs_acc;
            last.1 += exp_acc;
        }
    }
    if bins.len() < 2 {
        return Err(Error::DegenerateTest(format!(
            "only {} merged cell(s); need at least 2",
            bins.len()
        )));
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(o, e)| {
            let d = o - e;
            d * d / e
        })
        .sum();
    let dof = bins.len() as u64 - 1;
    let p = stats::chi_square_sf(statistic, dof);
    Ok(TestReport::statistical(
        name,
        statistic,
        Some(dof),
        p,
        p_gate,
        reference,
    ))
}

/// z-test of a sample mean against an exact mean and variance. Passes at
/// `|z| <= 4`; a zero-variance reference degenerates to exact equality.
pub fn moment_ztest(
    name: &str,
    sample_mean: f64,
    exact_mean: f64,
    exact_variance: f64,
    replicates: u64,
    reference: &str,
) -> Result<TestReport> {
    if replicates < 30 {
        return Err(Error::Parameter(format!(
            "z-test needs at least 30 replicates, got {replicates}"
        )));
    }
    if exact_variance == 0.0 {
        let equal = sample_mean == exact_mean;
        return Ok(TestReport::exact(
            name,
            if equal { 0.0 } else { f64::INFINITY },
            equal,
            reference,
        ));
    }
    let z = (sample_mean - exact_mean) / (exact_variance / replicates as f64).sqrt();
    Ok(TestReport::exact(name, z, z.abs() <= 4.0, reference))
}

/// Grow seeded trees and snapshot every age up to `max_age`, yielding
/// `count` states for property sweeps.
pub fn seeded_states(
    theta: u32,
    max_age: u64,
    count: usize,
    master_seed: u64,
) -> Result<Vec<TreeState>> {
    let mut states = Vec::with_capacity(count);
    let mut replicate = 0u64;
    while states.len() < count {
        let mut state = TreeState::init(theta)?;
        let mut draws = DrawSource::seeded_stream(master_seed, replicate);
        for _ in 0..max_age {
            state.grow(&mut draws)?;
            states.push(state.clone());
            if states.len() == count {
                break;
            }
        }
        replicate += 1;
    }
    Ok(states)
}

fn onestep_expectation(state: &TreeState, r_offset: i64) -> Result<ExactRational> {
    let theta = state.theta;
    let j = state.age + 1;
    let tau = state.vertex_count() as u64;
    let (x1, _) = state.x1_x2();
    let factors = martingale_factors(theta, j)?;
    let r = &factors.r + int(r_offset);
    let take = theta as u64 - 1;
    let mut expectation = int(0);
    for q in 0..=take.min(x1) {
        let weight = hypergeom_pmf(tau, x1, 0, take, q, 0)?;
        let m_next = &r * int((x1 - q + 1) as i64) + &factors.s;
        expectation += weight * m_next;
    }
    Ok(expectation)
}

/// Exact one-step martingale identity on a set of states: the
/// hypergeometric-weighted expectation of the next martingale value must
/// equal the current one, as rationals, on every state.
pub fn martingale_onestep_check(states: &[TreeState]) -> Result<TestReport> {
    martingale_onestep_inner(states, 0)
}

/// Mutation control: the same check with the next-step factor `r`
/// perturbed by +1. A correct implementation must report failure here.
pub fn martingale_onestep_check_perturbed(states: &[TreeState]) -> Result<TestReport> {
    martingale_onestep_inner(states, 1)
}

fn martingale_onestep_inner(states: &[TreeState], r_offset: i64) -> Result<TestReport> {
    if states.is_empty() {
        return Err(Error::Parameter("no states to check".into()));
    }
    let mut all_equal = true;
    for state in states {
        let expect = onestep_expectation(state, r_offset)?;
        let current = martingale_value(state)?;
        if expect != current {
            all_equal = false;
            break;
        }
    }
    Ok(TestReport::exact(
        if r_offset == 0 {
            "martingale_onestep"
        } else {
            "martingale_onestep_perturbed"
        },
        states.len() as f64,
        all_equal,
        if r_offset == 0 {
            "exact conditional expectation of the next martingale value"
        } else {
            "perturbed-factor mutation control"
        },
    ))
}

/// Gates for the normality verdict.
#[derive(Debug, Clone, Copy)]
pub struct NormalityGates {
    pub skew: f64,
    pub excess_kurtosis: f64,
    pub ks_p: f64,
}

impl Default for NormalityGates {
    fn default() -> Self {
        NormalityGates {
            skew: 0.1,
            excess_kurtosis: 0.2,
            ks_p: 1e-3,
        }
    }
}

/// Skewness, excess kurtosis, and KS distance of an (already
/// standardized) sample against the standard normal.
#[derive(Debug, Clone, Copy)]
pub struct NormalityOutcome {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks_statistic: f64,
    pub ks_p: f64,
    pub skew_pass: bool,
    pub kurt_pass: bool,
    pub ks_pass: bool,
}

impl NormalityOutcome {
    pub fn pass(&self) -> bool {
        self.skew_pass && self.kurt_pass && self.ks_pass
    }

    pub fn into_report(self, name: &str, reference: &str) -> TestReport {
        TestReport {
            name: name.into(),
            statistic: self.ks_statistic,
            dof: None,
            p_value: Some(self.ks_p),
            exact_pass: None,
            pass: self.pass(),
            reference: format!(
                "{reference}; skew={:.4} kurt={:.4}",
                self.skewness, self.excess_kurtosis
            ),
        }
    }
}

pub fn normality_check(standardized: &[f64], gates: NormalityGates) -> Result<NormalityOutcome> {
    if standardized.len() < 1_000 {
        return Err(Error::InsufficientSample(format!(
            "normality check needs >= 1000 points, got {}",
            standardized.len()
        )));
    }
    let m = stats::sample_moments(standardized);
    let (d, p) = stats::ks_test_standard_normal(standardized);
    Ok(NormalityOutcome {
        skewness: m.skewness,
        excess_kurtosis: m.excess_kurtosis,
        ks_statistic: d,
        ks_p: p,
        skew_pass: m.skewness.abs() <= gates.skew,
        kurt_pass: m.excess_kurtosis.abs() <= gates.excess_kurtosis,
        ks_pass: p > gates.ks_p,
    })
}

/// Standardize a continuous sample by a known mean and variance.
pub fn standardize(values: &[f64], mean: f64, variance: f64) -> Vec<f64> {
    let sd = variance.sqrt();
    values.iter().map(|&v| (v - mean) / sd).collect()
}

/// Standardize integer-valued samples for comparison against a continuous
/// reference: adds a deterministic uniform dither on `[-1/2, 1/2)` (which
/// keeps the mean and adds 1/12 to the variance). A KS test of a lattice
/// sample against a continuous CDF would otherwise reject on the lattice
/// jumps alone, regardless of how close the law is to its limit.
pub fn standardize_lattice(values: &[u32], mean: f64, variance: f64, jitter_seed: u64) -> Vec<f64> {
    let mut rng = replicate_rng(jitter_seed, u64::MAX);
    let sd = (variance + 1.0 / 12.0).sqrt();
    values
        .iter()
        .map(|&v| (v as f64 + rng.random::<f64>() - 0.5 - mean) / sd)
        .collect()
}

/// Chi-square comparison of sampled `C_{n,k} - 1`, for `k = round(alpha
/// n)`, against the Poisson law with rate `(theta - 1) ln(1/alpha)`.
pub fn poisson_phase_check(
    theta: u32,
    alpha: f64,
    n: u64,
    replicates: u64,
    master_seed: u64,
) -> Result<TestReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let k = (alpha * n as f64).round() as u64;
    let config = SimConfig {
        theta,
        n,
        replicates,
        master_seed,
        tracked_vertex: Some(k),
        record_martingale: false,
    };
    let run = run_local(&config)?;
    let counts = run.counts();
    let rate = (theta as f64 - 1.0) * (1.0 / alpha).ln();
    let mut probs: Vec<f64> = (0..counts.len() as u64)
        .map(|j| stats::poisson_pmf(rate, j))
        .collect();
    // fold the unbounded Poisson tail into the last cell
    let head: f64 = probs[..probs.len() - 1].iter().sum();
    let last = probs.len() - 1;
    probs[last] = (1.0 - head).max(0.0);
    chi_square_gof(
        "poisson_phase",
        &counts,
        &probs,
        1e-3,
        &format!("shifted Poisson(rate {rate:.6}) from the intermediate-phase law"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_profile::{exact_mean, exact_pmf, exact_variance};
    use crate::rational::ratio;

    fn config(theta: u32, n: u64, replicates: u64, seed: u64, k: Option<u64>) -> SimConfig {
        SimConfig {
            theta,
            n,
            replicates,
            master_seed: seed,
            tracked_vertex: k,
            record_martingale: false,
        }
    }

    #[test]
    fn config_validation() {
        assert!(config(1, 5, 10, 0, None).validate().is_err());
        assert!(config(2, 5, 0, 0, None).validate().is_err());
        assert!(config(2, 5, 10, 0, Some(9)).validate().is_err());
        assert!(config(2, 5, 10, 0, Some(5)).validate().is_ok());
    }

    #[test]
    fn local_run_boundary_is_deterministic() {
        let run = run_local(&config(3, 7, 50, 123, Some(7))).unwrap();
        assert!(run.values.iter().all(|&v| v == 1));
        assert_eq!(run.counts(), vec![50]);
    }

    #[test]
    fn local_run_reproduces_and_matches_serial() {
        let c = config(3, 40, 400, 99, Some(3));
        let a = run_local(&c).unwrap();
        let b = run_local(&c).unwrap();
        assert_eq!(a.values, b.values);
        // replicate 7 recomputed by hand from its stream
        let mut rng = replicate_rng(99, 7);
        let mut expect = 1u32;
        for i in 4..=40u64 {
            let p = 2.0 / (i as f64 + 2.0);
            if rng.random::<f64>() < p {
                expect += 1;
            }
        }
        assert_eq!(a.values[7], expect);
    }

    #[test]
    fn local_run_mean_tracks_exact_mean() {
        let c = config(3, 30, 20_000, 7, Some(2));
        let run = run_local(&c).unwrap();
        let mean = to_f64(&exact_mean(3, 30, 2).unwrap());
        let var = to_f64(&exact_variance(3, 30, 2).unwrap());
        let report = moment_ztest(
            "local_mean",
            run.sample_mean(),
            mean,
            var,
            c.replicates,
            "exact local moments",
        )
        .unwrap();
        assert!(report.pass, "z = {}", report.statistic);
    }

    #[test]
    fn full_tree_and_shortcut_agree_in_law() {
        // same exact pmf reference for both sampling routes
        let table = crate::combinatorics::StirlingTable::new(12);
        let pmf = exact_pmf(3, 12, 2, &table).unwrap();
        let probs = pmf.to_floats();
        for (label, run) in [
            (
                "shortcut",
                run_local(&config(3, 12, 30_000, 5, Some(2))).unwrap(),
            ),
            (
                "full_tree",
                run_local_full_tree(&config(3, 12, 30_000, 6, Some(2))).unwrap(),
            ),
        ] {
            let report = chi_square_gof(label, &run.counts(), &probs, 1e-3, "exact pmf").unwrap();
            assert!(report.pass, "{label}: p = {:?}", report.p_value);
        }
    }

    #[test]
    fn global_run_deterministic_start() {
        let run = run_global(&config(2, 1, 25, 11, None)).unwrap();
        assert!(run.x1.iter().all(|&v| v == 2));
        assert!(run.x2.iter().all(|&v| v == 1));
    }

    #[test]
    fn global_run_martingale_trace() {
        let mut c = config(2, 10, 100, 3, None);
        c.record_martingale = true;
        let run = run_global(&c).unwrap();
        let m = run.martingale.as_ref().unwrap();
        // theta = 2: M = (n+1) X1 + 1 - (n+1)(n+2)/2, an integer-valued
        // transform; every replicate must land on one
        for &v in m {
            assert!((v - v.round()).abs() < 1e-9);
        }
        let mean = m.iter().sum::<f64>() / m.len() as f64;
        assert!((mean - 2.0).abs() < 1.5, "E[M] should stay near theta");
    }

    #[test]
    fn chi_square_hand_fixtures() {
        // exactly proportional observations give a zero statistic
        let r = chi_square_gof("prop", &[25, 50, 25], &[0.25, 0.5, 0.25], 1e-3, "synthetic")
            .unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, Some(1.0));

        // two-cell fixture: (60 - 50)^2/50 + (40 - 50)^2/50 = 4, dof 1
        let r = chi_square_gof("two", &[60, 40], &[0.5, 0.5], 1e-3, "hand").unwrap();
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert_eq!(r.dof, Some(1));
        assert!((r.p_value.unwrap() - 0.045_500_263_896_358_42).abs() < 1e-10);

        // three-cell fixture with dof 2: sf evaluates to exp(-stat/2)
        let r = chi_square_gof("three", &[30, 50, 20], &[0.25, 0.5, 0.25], 1e-3, "hand").unwrap();
        assert!((r.statistic - 2.0).abs() < 1e-12);
        assert!((r.p_value.unwrap() - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn chi_square_merges_thin_tails() {
        // the last two cells expect under 5 each and must merge together,
        // and the trailing remainder folds into that merged cell
        let counts = [500u64, 480, 15, 4, 1];
        let probs = [0.5, 0.48, 0.012, 0.004, 0.004];
        let r = chi_square_gof("merge", &counts, &probs, 1e-3, "synthetic").unwrap();
        assert_eq!(r.dof, Some(3), "five cells merge into four");
        assert!(r.pass);
    }

    #[test]
    fn chi_square_degenerate_cases() {
        assert!(chi_square_gof("none", &[0, 0], &[0.5, 0.5], 1e-3, "x").is_err());
        assert!(chi_square_gof("one", &[9], &[1.0], 1e-3, "x").is_err());
        assert!(chi_square_gof("mismatch", &[9, 1], &[1.0], 1e-3, "x").is_err());
    }

    #[test]
    fn ztest_cases() {
        let r = moment_ztest("eq", 1.5, 1.5, 2.0, 100, "x").unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
        let r = moment_ztest("deg", 2.0, 2.0, 0.0, 100, "x").unwrap();
        assert_eq!(r.exact_pass, Some(true));
        let r = moment_ztest("deg_bad", 2.0, 2.5, 0.0, 100, "x").unwrap();
        assert!(!r.pass);
        assert!(moment_ztest("few", 0.0, 0.0, 1.0, 10, "x").is_err());
    }

    #[test]
    fn martingale_onestep_on_initial_states() {
        for theta in [2u32, 3, 4] {
            let state = TreeState::init(theta).unwrap();
            let r = martingale_onestep_check(&[state]).unwrap();
            assert!(r.pass, "theta={theta}");
        }
    }

    #[test]
    fn martingale_onestep_sweep_and_mutation_control() {
        let states = seeded_states(3, 25, 40, 2024).unwrap();
        assert_eq!(states.len(), 40);
        let ok = martingale_onestep_check(&states).unwrap();
        assert!(ok.pass);
        let bad = martingale_onestep_check_perturbed(&states).unwrap();
        assert!(!bad.pass, "perturbed factors must break the identity");
    }

    #[test]
    fn martingale_onestep_holds_on_every_dp_reachable_state() {
        // the identity depends on the state only through (x1, tau), so a
        // synthetic realization of each reachable (x1, x2) covers them all
        use crate::oracle::dp_joint_distribution;
        for theta in [2u32, 3] {
            let dp = dp_joint_distribution(theta, 12).unwrap();
            let mut states = Vec::new();
            for dist in &dp {
                let tau = dist.n + theta as u64;
                for &(x1, x2) in dist.mass.keys() {
                    let mut containment = vec![1u32; x1 as usize];
                    containment.extend(std::iter::repeat_n(2u32, x2 as usize));
                    containment.extend(std::iter::repeat_n(
                        3u32,
                        (tau - x1 - x2) as usize,
                    ));
                    states.push(TreeState::from_parts(theta, containment).unwrap());
                }
            }
            let report = martingale_onestep_check(&states).unwrap();
            assert!(report.pass, "theta={theta}, {} states", states.len());
        }
    }

    #[test]
    fn verdict_gates_hold_across_alternative_seeds() {
        // reduced-size rendition of the seed-robustness contract: the
        // p-gates stay green for at least 9 of 10 fixed master seeds
        let mut passes = 0;
        for seed in 1..=10u64 {
            let report = poisson_phase_check(2, 0.5, 2_000, 20_000, seed).unwrap();
            passes += report.pass as u32;
        }
        assert!(passes >= 9, "only {passes}/10 seeds passed");
    }

    #[test]
    fn normality_accepts_synthetic_normal() {
        // Box-Muller from the deterministic stream
        let mut rng = replicate_rng(777, 0);
        let mut sample = Vec::with_capacity(20_000);
        while sample.len() < 20_000 {
            let u1: f64 = rng.random::<f64>().max(1e-300);
            let u2: f64 = rng.random();
            let r = (-2.0 * u1.ln()).sqrt();
            let t = 2.0 * std::f64::consts::PI * u2;
            sample.push(r * t.cos());
            sample.push(r * t.sin());
        }
        let outcome = normality_check(&sample, NormalityGates::default()).unwrap();
        assert!(outcome.pass(), "{outcome:?}");
    }

    #[test]
    fn normality_rejects_shifted_normal() {
        let mut rng = replicate_rng(778, 0);
        let sample: Vec<f64> = (0..5000)
            .map(|_| {
                let u1: f64 = rng.random::<f64>().max(1e-300);
                let u2: f64 = rng.random();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos() + 0.4
            })
            .collect();
        let outcome = normality_check(&sample, NormalityGates::default()).unwrap();
        assert!(!outcome.ks_pass);
    }

    #[test]
    fn normality_needs_enough_data() {
        assert!(normality_check(&[0.0; 100], NormalityGates::default()).is_err());
    }

    #[test]
    fn lattice_standardization_is_deterministic_and_centered() {
        let values: Vec<u32> = (0..4000).map(|i| (i % 7) as u32).collect();
        let a = standardize_lattice(&values, 3.0, 4.0, 5);
        let b = standardize_lattice(&values, 3.0, 4.0, 5);
        assert_eq!(a, b);
        let m = stats::sample_moments(&a);
        assert!(m.mean.abs() < 0.05);
    }

    #[test]
    fn poisson_phase_check_small_instance() {
        // theta = 2, alpha = 1/2 at a desk-size n; the finite-n law is
        // already close to Poisson(ln 2)
        let report = poisson_phase_check(2, 0.5, 2000, 20_000, 42).unwrap();
        assert!(report.pass, "p = {:?}", report.p_value);
        // bit-exact reproducibility
        let again = poisson_phase_check(2, 0.5, 2000, 20_000, 42).unwrap();
        assert_eq!(report.statistic.to_bits(), again.statistic.to_bits());
        assert_eq!(report.p_value, again.p_value);
    }

    #[test]
    fn seeded_states_cover_requested_ages() {
        let states = seeded_states(3, 10, 25, 1).unwrap();
        assert_eq!(states.len(), 25);
        assert!(states.iter().all(|s| s.age >= 1 && s.age <= 10));
        assert_eq!(states[0].age, 1);
        assert_eq!(states[10].age, 1); // second tree starts over
    }

    #[test]
    fn report_csv_shape() {
        let r = TestReport::statistical("x", 1.5, Some(3), 0.2, 1e-3, "ref");
        assert!(r.pass);
        let row = r.to_csv_row();
        assert!(row.starts_with("x,"));
        assert!(row.ends_with(",true"));
        assert_eq!(TestReport::csv_header().split(',').count(), 5);
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.contains("\"p_value\""));
        assert!(!j.contains("exact_pass"));
        let e = TestReport::exact("y", 0.0, true, "ref");
        let j = serde_json::to_string(&e).unwrap();
        assert!(j.contains("exact_pass"));
        assert!(!j.contains("p_value"));
    }

    #[test]
    fn martingale_mean_is_conserved_under_dp() {
        use crate::oracle::dp_joint_distribution;
        for theta in [2u32, 3] {
            let dp = dp_joint_distribution(theta, 8).unwrap();
            for dist in &dp {
                let f = martingale_factors(theta, dist.n).unwrap();
                let mean = dist.expectation(|x1, _| &f.r * int(x1 as i64) + &f.s);
                assert_eq!(mean, int(theta as i64), "theta={theta} n={}", dist.n);
            }
        }
    }

    #[test]
    fn conditional_variance_term_agrees_with_direct_enumeration() {
        let states = seeded_states(2, 15, 10, 7).unwrap();
        for state in &states {
            let term = crate::global_profile::conditional_variance_term(state).unwrap();
            let theta = state.theta;
            let j = state.age + 1;
            let tau = state.vertex_count() as u64;
            let (x1, _) = state.x1_x2();
            let cur = martingale_factors(theta, j).unwrap();
            let prev_value = martingale_value(state).unwrap();
            let mut expect = int(0);
            for q in 0..=(theta as u64 - 1).min(x1) {
                let w = hypergeom_pmf(tau, x1, 0, theta as u64 - 1, q, 0).unwrap();
                let m_next = &cur.r * int((x1 - q + 1) as i64) + &cur.s;
                let d = m_next - &prev_value;
                expect += w * &d * &d;
            }
            assert_eq!(term, expect);
        }
    }

    #[test]
    fn ratio_sanity_for_probabilities() {
        assert_eq!(ratio(1, 3) + ratio(2, 3), ratio(1, 1));
    }
}
