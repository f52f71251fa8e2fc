//! Independent brute-force ground truth.
//!
//! Three exact routes that share no code with the analytic modules they
//! check: a trivariate hypergeometric pmf from binomial counting, forward
//! dynamic programming over the Markov chain `(X_{n,1}, X_{n,2})`, and
//! exhaustive enumeration of every growth history for tiny trees.
//!
//! The DP state is `(x1, x2)` alone: the recruit counts at levels 1 and 2
//! are hypergeometric in `(x1, x2, tau)` and the transition touches nothing
//! else, so the pair is autonomously Markov (vertices at level 3 and above
//! are interchangeable for its evolution). The history-enumeration
//! agreement test exercises exactly this reduction.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::global_profile::GlobalMoments;
use crate::local_profile::LocalPmf;
use crate::rational::{from_biguint, int, ExactRational};

/// Exact joint law of `(X_{n,1}, X_{n,2})` at one age.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    pub theta: u32,
    pub n: u64,
    pub mass: BTreeMap<(u64, u64), ExactRational>,
}

impl JointDistribution {
    pub fn total_mass(&self) -> ExactRational {
        self.mass.values().sum()
    }

    /// Exact joint moments up to second order.
    pub fn moments(&self) -> GlobalMoments {
        let mut e1 = ExactRational::zero();
        let mut e2 = ExactRational::zero();
        let mut e11 = ExactRational::zero();
        let mut e12 = ExactRational::zero();
        let mut e22 = ExactRational::zero();
        for (&(x1, x2), p) in &self.mass {
            let x1 = int(x1 as i64);
            let x2 = int(x2 as i64);
            e1 += p * &x1;
            e2 += p * &x2;
            e11 += p * &x1 * &x1;
            e12 += p * &x1 * &x2;
            e22 += p * &x2 * &x2;
        }
        GlobalMoments {
            theta: self.theta,
            n: self.n,
            e1,
            e2,
            e11,
            e12,
            e22,
        }
    }

    /// Exact expectation of a state function.
    pub fn expectation<F: Fn(u64, u64) -> ExactRational>(&self, f: F) -> ExactRational {
        let mut acc = ExactRational::zero();
        for (&(x1, x2), p) in &self.mass {
            acc += p * f(x1, x2);
        }
        acc
    }
}

/// Every growth history of a tiny tree, with its exact probability and the
/// full per-vertex containment profile it produces.
#[derive(Debug, Clone)]
pub struct HistoryEnsemble {
    pub theta: u32,
    pub n: u64,
    pub outcomes: Vec<(Vec<u32>, ExactRational)>,
}

/// Exact trivariate hypergeometric mass
/// `P(Q1 = q1, Q2 = q2)` when a sample of size `s` is drawn without
/// replacement from `tau` items of which `n1` are of the first color and
/// `n2` of the second. Infeasible `(q1, q2)` get probability zero.
pub fn hypergeom_pmf(tau: u64, n1: u64, n2: u64, s: u64, q1: u64, q2: u64) -> Result<ExactRational> {
    if n1 + n2 > tau {
        return Err(Error::Domain(format!(
            "color counts {n1}+{n2} exceed population {tau}"
        )));
    }
    if s > tau {
        return Err(Error::Domain(format!(
            "sample size {s} exceeds population {tau}"
        )));
    }
    if q1 > n1 || q2 > n2 || q1 + q2 > s {
        return Ok(ExactRational::zero());
    }
    let rest = s - q1 - q2;
    if rest > tau - n1 - n2 {
        return Ok(ExactRational::zero());
    }
    let ways = binomial(n1, q1) * binomial(n2, q2) * binomial(tau - n1 - n2, rest);
    Ok(from_biguint(ways) / from_biguint(binomial(tau, s)))
}

pub const DP_BUDGET_DEFAULT: u64 = 30;

/// Exact forward DP for the law of `(X_{n,1}, X_{n,2})`, `n = 0..=n_max`.
pub fn dp_joint_distribution(theta: u32, n_max: u64) -> Result<Vec<JointDistribution>> {
    dp_joint_distribution_with_budget(theta, n_max, DP_BUDGET_DEFAULT)
}

pub fn dp_joint_distribution_with_budget(
    theta: u32,
    n_max: u64,
    budget: u64,
) -> Result<Vec<JointDistribution>> {
    if theta < 2 {
        return Err(Error::Parameter(format!(
            "hyperedge size theta must be >= 2, got {theta}"
        )));
    }
    if n_max > budget {
        return Err(Error::Capacity(format!(
            "DP horizon {n_max} exceeds budget {budget}"
        )));
    }
    let take = theta as u64 - 1;
    let mut current = BTreeMap::new();
    current.insert((theta as u64, 0u64), ExactRational::one());
    let mut out = vec![JointDistribution {
        theta,
        n: 0,
        mass: current.clone(),
    }];
    for n in 1..=n_max {
        let tau = n - 1 + theta as u64;
        let mut next: BTreeMap<(u64, u64), ExactRational> = BTreeMap::new();
        for (&(x1, x2), p) in &current {
            for q1 in 0..=take.min(x1) {
                for q2 in 0..=(take - q1).min(x2) {
                    let prob = hypergeom_pmf(tau, x1, x2, take, q1, q2)?;
                    if prob.is_zero() {
                        continue;
                    }
                    let state = (x1 - q1 + 1, x2 + q1 - q2);
                    *next.entry(state).or_insert_with(ExactRational::zero) += p * prob;
                }
            }
        }
        current = next;
        out.push(JointDistribution {
            theta,
            n,
            mass: current.clone(),
        });
    }
    Ok(out)
}

pub const HISTORY_BUDGET_DEFAULT: u64 = 300_000;

/// Exhaustively realize every growth history of `n` steps. The total count
/// (the product of per-step subset counts) is checked up front against the
/// budget; oversized requests are refused before any work happens.
pub fn enumerate_histories(theta: u32, n: u64) -> Result<HistoryEnsemble> {
    enumerate_histories_with_budget(theta, n, HISTORY_BUDGET_DEFAULT)
}

pub fn enumerate_histories_with_budget(
    theta: u32,
    n: u64,
    budget: u64,
) -> Result<HistoryEnsemble> {
    if theta < 2 {
        return Err(Error::Parameter(format!(
            "hyperedge size theta must be >= 2, got {theta}"
        )));
    }
    let take = theta as u64 - 1;
    let mut count = 1u64;
    for step in 1..=n {
        let tau = step - 1 + theta as u64;
        let choices = binomial(tau, take)
            .try_into()
            .map_err(|_| Error::Capacity("history count overflows".into()))
            .and_then(|c: u64| {
                count
                    .checked_mul(c)
                    .ok_or_else(|| Error::Capacity("history count overflows".into()))
            })?;
        count = choices;
        if count > budget {
            return Err(Error::Capacity(format!(
                "{count}+ histories exceed budget {budget}"
            )));
        }
    }

    let probability = ExactRational::one() / int(count as i64);
    let mut outcomes = Vec::with_capacity(count as usize);
    let mut containment: Vec<u32> = vec![1; theta as usize];
    descend(theta, n, 1, &mut containment, &probability, &mut outcomes);
    Ok(HistoryEnsemble { theta, n, outcomes })
}

fn descend(
    theta: u32,
    n: u64,
    step: u64,
    containment: &mut Vec<u32>,
    probability: &ExactRational,
    outcomes: &mut Vec<(Vec<u32>, ExactRational)>,
) {
    if step > n {
        outcomes.push((containment.clone(), probability.clone()));
        return;
    }
    let tau = containment.len();
    let take = theta as usize - 1;
    let mut subset: Vec<usize> = (0..take).collect();
    loop {
        for &v in &subset {
            containment[v] += 1;
        }
        containment.push(1);
        descend(theta, n, step + 1, containment, probability, outcomes);
        containment.pop();
        for &v in &subset {
            containment[v] -= 1;
        }
        // next lexicographic subset of 0..tau
        let mut i = take;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if subset[i] != i + tau - take {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..take {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Marginal law of `(X_{n,1}, X_{n,2})` under an ensemble.
pub fn joint_marginal_from_histories(ensemble: &HistoryEnsemble) -> JointDistribution {
    let mut mass: BTreeMap<(u64, u64), ExactRational> = BTreeMap::new();
    for (containment, p) in &ensemble.outcomes {
        let x1 = containment.iter().filter(|&&c| c == 1).count() as u64;
        let x2 = containment.iter().filter(|&&c| c == 2).count() as u64;
        *mass.entry((x1, x2)).or_insert_with(ExactRational::zero) += p;
    }
    JointDistribution {
        theta: ensemble.theta,
        n: ensemble.n,
        mass,
    }
}

/// Marginal pmf of the containment of the vertex labeled `k` under an
/// ensemble (label 0 is the representative originator at index 0).
pub fn local_marginal_from_histories(ensemble: &HistoryEnsemble, k: u64) -> Result<LocalPmf> {
    if k > ensemble.n {
        return Err(Error::Range(format!(
            "vertex label {k} not present at age {}",
            ensemble.n
        )));
    }
    let index = if k == 0 {
        0
    } else {
        ensemble.theta as usize + k as usize - 1
    };
    let support = (ensemble.n - k + 1) as usize;
    let mut probabilities = vec![ExactRational::zero(); support];
    for (containment, p) in &ensemble.outcomes {
        let level = containment[index] as usize;
        probabilities[level - 1] += p;
    }
    Ok(LocalPmf {
        theta: ensemble.theta,
        n: ensemble.n,
        k,
        probabilities,
    })
}
