//! Perturbed-history exploration (PHE) for stochastic multi-armed bandits.
//!
//! PHE estimates each arm's value as the average of its observed rewards
//! mixed with `⌈a·s⌉` fresh Bernoulli(½) pseudo-rewards, where `s` is the
//! number of pulls and `a` is the perturbation scale, then pulls the arm with
//! the highest perturbed average. Because the pseudo-reward sum is a single
//! binomial draw, the per-round cost does not grow with the round index.
//!
//! This crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! - [`rng`]: seeded counter-based streams derived from `(seed, problem, run)`.
//! - [`dist`]: binomial/beta sampling and exact binomial pmf and tails.
//! - [`env`]: Bernoulli, beta and rescaled bandit instances.
//! - [`policy`]: PHE plus UCB1, KL-UCB, Bernoulli Thompson sampling, Giro and
//!   FPL behind one [`policy::Policy`] trait.
//! - [`sim`]: the episode loop and pseudo-regret curves.
//! - [`theory`]: exact-enumeration checks of the optimism lemmas and the
//!   closed-form regret bounds.
//!
//! Parallel experiment orchestration, timing, file formats and the CLI live in
//! the `phe-bench` crate.
#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > y)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dist;
pub mod env;
mod error;
pub mod math;
pub mod policy;
pub mod rng;
pub mod sim;
pub mod theory;

pub use error::{Error, Result};
