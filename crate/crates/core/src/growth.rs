//! The hyperrecursive-tree growth state machine.
//!
//! A tree with hyperedge size `theta` starts from `theta` originator
//! vertices sharing one hyperedge. Every step draws a uniform
//! `theta - 1`-subset of the existing vertices, increments the containment
//! count of each drawn vertex, and appends one new vertex with containment
//! one. Labels map to indices arithmetically: originators sit at
//! `0..theta`, the vertex labeled `j >= 1` at `theta + j - 1`. The
//! representative originator for label 0 is index 0.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Full state of one growing hyperrecursive tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeState {
    pub theta: u32,
    pub age: u64,
    /// One containment count per vertex, in index order.
    pub containment: Vec<u32>,
    /// Recorded hyperedges (vertex index sets), when enabled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<Vec<u32>>>,
}

/// Where growth draws come from: a seeded pseudorandom stream, or an
/// injected list of subsets for replaying a specific history.
pub enum DrawSource {
    Seeded(Box<ChaCha8Rng>),
    Injected(VecDeque<Vec<usize>>),
}

/// Independent replicate stream `replicate` under one master seed. Streams
/// never overlap, so replicates may run in parallel and still agree with a
/// serial run.
pub fn replicate_rng(master_seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate);
    rng
}

impl DrawSource {
    pub fn seeded(seed: u64) -> Self {
        DrawSource::Seeded(Box::new(replicate_rng(seed, 0)))
    }

    pub fn seeded_stream(master_seed: u64, replicate: u64) -> Self {
        DrawSource::Seeded(Box::new(replicate_rng(master_seed, replicate)))
    }

    pub fn inject<I: IntoIterator<Item = Vec<usize>>>(subsets: I) -> Self {
        DrawSource::Injected(subsets.into_iter().collect())
    }
}

/// Uniform `take`-subset of `0..tau`, written into `out` (order arbitrary).
/// Rejection sampling for small draws, partial Fisher-Yates otherwise.
pub(crate) fn sample_distinct<R: Rng>(rng: &mut R, tau: usize, take: usize, out: &mut Vec<usize>) {
    out.clear();
    debug_assert!(take <= tau);
    if take <= 8 && 2 * take <= tau {
        while out.len() < take {
            let v = rng.random_range(0..tau);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    } else {
        let mut idx: Vec<usize> = (0..tau).collect();
        for i in 0..take {
            let j = rng.random_range(i..tau);
            idx.swap(i, j);
            out.push(idx[i]);
        }
    }
}

impl TreeState {
    /// Age-0 tree: `theta` originators, each contained in the single
    /// founding hyperedge.
    pub fn init(theta: u32) -> Result<Self> {
        if theta < 2 {
            return Err(Error::Parameter(format!(
                "hyperedge size theta must be >= 2, got {theta}"
            )));
        }
        Ok(TreeState {
            theta,
            age: 0,
            containment: vec![1; theta as usize],
            edges: None,
        })
    }

    /// Enable hyperedge recording (memory grows as O(n * theta)).
    pub fn with_edge_recording(mut self) -> Self {
        let founders: Vec<u32> = (0..self.theta).collect();
        self.edges = Some(vec![founders]);
        self
    }

    /// Assemble a state from raw counts, without reachability checks; used
    /// for snapshots and for probing formulas on synthetic states.
    pub fn from_parts(theta: u32, containment: Vec<u32>) -> Result<Self> {
        if theta < 2 {
            return Err(Error::Parameter(format!(
                "hyperedge size theta must be >= 2, got {theta}"
            )));
        }
        if (containment.len() as u64) < theta as u64 {
            return Err(Error::Parameter(
                "containment must cover at least the originators".into(),
            ));
        }
        let age = containment.len() as u64 - theta as u64;
        Ok(TreeState {
            theta,
            age,
            containment,
            edges: None,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.containment.len()
    }

    /// One growth step.
    pub fn grow(&mut self, draws: &mut DrawSource) -> Result<()> {
        let tau = self.vertex_count();
        let take = self.theta as usize - 1;
        let mut subset = Vec::with_capacity(take);
        match draws {
            DrawSource::Seeded(rng) => sample_distinct(rng.as_mut(), tau, take, &mut subset),
            DrawSource::Injected(queue) => {
                let injected = queue.pop_front().ok_or_else(|| {
                    Error::Injection("injected draw sequence exhausted".into())
                })?;
                if injected.len() != take {
                    return Err(Error::Injection(format!(
                        "injected subset has {} members, expected {take}",
                        injected.len()
                    )));
                }
                for (pos, &v) in injected.iter().enumerate() {
                    if v >= tau {
                        return Err(Error::Injection(format!(
                            "injected vertex index {v} out of range (tau = {tau})"
                        )));
                    }
                    if injected[..pos].contains(&v) {
                        return Err(Error::Injection(format!(
                            "injected subset repeats vertex {v}"
                        )));
                    }
                }
                subset = injected;
            }
        }
        for &v in &subset {
            self.containment[v] += 1;
        }
        self.containment.push(1);
        if let Some(edges) = &mut self.edges {
            let mut edge: Vec<u32> = subset.iter().map(|&v| v as u32).collect();
            edge.push(tau as u32);
            edge.sort_unstable();
            edges.push(edge);
        }
        self.age += 1;
        Ok(())
    }

    /// Grow `steps` times from a draw source.
    pub fn grow_many(&mut self, steps: u64, draws: &mut DrawSource) -> Result<()> {
        for _ in 0..steps {
            self.grow(draws)?;
        }
        Ok(())
    }

    /// Containment count of the vertex labeled `k` (label 0 means the
    /// representative originator, fixed at index 0).
    pub fn containment_of(&self, k: u64) -> Result<u32> {
        if k > self.age {
            return Err(Error::Range(format!(
                "vertex label {k} not yet present at age {}",
                self.age
            )));
        }
        let index = if k == 0 {
            0
        } else {
            self.theta as usize + k as usize - 1
        };
        Ok(self.containment[index])
    }

    /// Counts of vertices per containment level: entry `i` holds the count
    /// at level `i + 1` for `i < max_level`, and the final entry aggregates
    /// every level above `max_level`.
    pub fn global_profile(&self, max_level: usize) -> Vec<u64> {
        let mut profile = vec![0u64; max_level + 1];
        for &c in &self.containment {
            let level = c as usize;
            if level <= max_level {
                profile[level - 1] += 1;
            } else {
                profile[max_level] += 1;
            }
        }
        profile
    }

    /// `(X_{n,1}, X_{n,2})`: vertices at the two smallest containment levels.
    pub fn x1_x2(&self) -> (u64, u64) {
        let mut x1 = 0;
        let mut x2 = 0;
        for &c in &self.containment {
            match c {
                1 => x1 += 1,
                2 => x2 += 1,
                _ => {}
            }
        }
        (x1, x2)
    }

    /// Total containment mass; equals `theta * (age + 1)` on every
    /// reachable state.
    pub fn containment_mass(&self) -> u64 {
        self.containment.iter().map(|&c| c as u64).sum()
    }
}

/// Probability that the step-`n` recruit contains a fixed existing vertex:
/// `(theta - 1) / (n - 1 + theta)`.
pub fn indicator_prob(theta: u32, n: u64) -> ExactRational {
    debug_assert!(n >= 1);
    ExactRational::new(
        (theta as i64 - 1).into(),
        (n as i64 - 1 + theta as i64).into(),
    )
}
