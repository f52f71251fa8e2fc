//! Containment profiles of hyperrecursive trees.
//!
//! A hyperrecursive tree with hyperedge size `theta` starts from `theta`
//! originator vertices sharing one hyperedge. Each growth step recruits a
//! uniformly random `theta - 1`-subset of the existing vertices into a new
//! hyperedge together with one new vertex. This crate computes the law of
//! the resulting containment profiles two ways and checks them against each
//! other:
//!
//! * exactly, in big-rational arithmetic ([`local_profile`],
//!   [`global_profile`], backed by the kernels in [`combinatorics`]);
//! * by independent brute force ([`oracle`]: exact Markov-chain DP and
//!   exhaustive history enumeration);
//! * by seeded Monte Carlo with statistical verdicts ([`montecarlo`]).
//!
//! The [`verify`] module bundles the cross-checks into named suites; the
//! `hyperrec` binary exposes everything on the command line.

pub mod combinatorics;
pub mod error;
pub mod global_profile;
pub mod growth;
pub mod local_profile;
pub mod montecarlo;
pub mod oracle;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use rational::ExactRational;
