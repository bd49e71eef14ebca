//! Bandit policies.
//!
//! Every policy maps its per-arm statistics to an [`IndexVector`] each round;
//! [`Agent`] turns that into the uniform select/pull/update driver: arms that
//! have never been pulled carry a `+∞` sentinel (so the first `K` rounds pull
//! each arm once), the arm with the largest score wins with ties broken
//! uniformly at random, and only the pulled arm's statistics change.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::rng::Stream;
use crate::{Error, Result};

mod fpl;
mod giro;
mod phe;
mod thompson;
mod ucb;

pub use fpl::{fpl_learning_rate, fpl_select, geometric_resample, Fpl, FPL_MAX_RESAMPLE};
pub use giro::{giro_estimate, Giro};
pub use phe::{phe_estimate, phe_pseudo_sum, Phe};
pub use thompson::{binarize, thompson_sample, Thompson};
pub use ucb::{bernoulli_kl, klucb_index, klucb_upper, ucb1_index, KlUcb, Ucb1};

/// Largest variance of any distribution on `[0, 1]`, attained by `Ber(1/2)`.
pub const SIGMA_MAX_SQ: f64 = 0.25;

/// Sufficient statistics of one arm: pull count `s` and reward sum `V`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmState {
    pub pulls: u64,
    pub reward_sum: f64,
}

impl ArmState {
    pub fn new(pulls: u64, reward_sum: f64) -> Self {
        Self { pulls, reward_sum }
    }

    pub fn record(&mut self, reward: f64) {
        self.pulls += 1;
        self.reward_sum += reward;
    }

    /// Empirical mean `V/s`, or `None` before the first pull.
    pub fn mean(&self) -> Option<f64> {
        (self.pulls > 0).then(|| self.reward_sum / self.pulls as f64)
    }
}

/// Per-arm selection scores; `+∞` marks an arm that must be tried first.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexVector(pub Vec<f64>);

impl IndexVector {
    pub fn new(arms: usize) -> Self {
        Self(vec![f64::INFINITY; arms])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Returns an index of a maximal score, breaking ties uniformly at random.
///
/// Uses reservoir sampling over the running set of maximizers, so randomness is
/// consumed only when a tie is actually encountered.
pub fn select_arm<R: Rng + ?Sized>(scores: &[f64], rng: &mut R) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let mut best = scores[0];
    let mut chosen = 0;
    let mut ties = 1u64;
    for (i, &v) in scores.iter().enumerate().skip(1) {
        if v > best || best.is_nan() {
            best = v;
            chosen = i;
            ties = 1;
        } else if v == best {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                chosen = i;
            }
        }
    }
    Ok(chosen)
}

/// Policy selection and hyperparameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)
)]
pub enum PolicySpec {
    /// Perturbed-history exploration with perturbation scale `a`.
    Phe {
        a: f64,
    },
    Ucb1,
    KlUcb {
        #[cfg_attr(feature = "serde", serde(default = "default_bisect_tol"))]
        bisect_tol: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_max_iter"))]
        max_iter: u32,
    },
    /// Bernoulli Thompson sampling with a `Beta(1, 1)` prior.
    Thompson,
    Giro {
        #[cfg_attr(feature = "serde", serde(default = "default_giro_a"))]
        a: f64,
        /// Resample the augmented history index by index (`true`) or draw the
        /// block counts with conditional binomials first (`false`, about 3x
        /// fewer draws at `a = 1`). Both are exact bootstrap samples and
        /// both cost O(s) per arm.
        #[cfg_attr(feature = "serde", serde(default))]
        exact_multinomial: bool,
    },
    Fpl {
        #[cfg_attr(feature = "serde", serde(default = "default_lr_scale"))]
        learning_rate_scale: f64,
        /// Geometric-resampling cap; `None` uses `min(⌈K/η_t⌉, 10⁴)`.
        #[cfg_attr(feature = "serde", serde(default))]
        resample_cap: Option<u64>,
    },
}

#[cfg(feature = "serde")]
fn default_bisect_tol() -> f64 {
    1e-6
}
#[cfg(feature = "serde")]
fn default_max_iter() -> u32 {
    64
}
#[cfg(feature = "serde")]
fn default_giro_a() -> f64 {
    1.0
}
#[cfg(feature = "serde")]
fn default_lr_scale() -> f64 {
    1.0
}

impl PolicySpec {
    pub const fn kl_ucb() -> Self {
        PolicySpec::KlUcb {
            bisect_tol: 1e-6,
            max_iter: 64,
        }
    }

    pub const fn giro(a: f64) -> Self {
        PolicySpec::Giro {
            a,
            exact_multinomial: false,
        }
    }

    pub const fn fpl() -> Self {
        PolicySpec::Fpl {
            learning_rate_scale: 1.0,
            resample_cap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive and finite, got {x}")))
            }
        };
        match *self {
            PolicySpec::Phe { a } | PolicySpec::Giro { a, .. } => positive("a", a),
            PolicySpec::KlUcb { bisect_tol, max_iter } => {
                positive("bisect_tol", bisect_tol)?;
                if max_iter == 0 {
                    return Err(Error::invalid("max_iter", "must be at least 1"));
                }
                Ok(())
            }
            PolicySpec::Fpl {
                learning_rate_scale,
                resample_cap,
            } => {
                positive("learning_rate_scale", learning_rate_scale)?;
                if resample_cap == Some(0) {
                    return Err(Error::invalid("resample_cap", "must be at least 1"));
                }
                Ok(())
            }
            PolicySpec::Ucb1 | PolicySpec::Thompson => Ok(()),
        }
    }

    /// Human-readable default label, e.g. `PHE(a=1.1)`.
    pub fn label(&self) -> String {
        match self {
            PolicySpec::Phe { a } => format!("PHE(a={a})"),
            PolicySpec::Ucb1 => "UCB1".into(),
            PolicySpec::KlUcb { .. } => "KL-UCB".into(),
            PolicySpec::Thompson => "TS".into(),
            PolicySpec::Giro { a, .. } => format!("Giro(a={a})"),
            PolicySpec::Fpl { .. } => "FPL".into(),
        }
    }

    /// Instantiates a fresh policy for a `arms`-armed problem.
    pub fn build(&self, arms: usize) -> Result<Agent> {
        self.validate()?;
        if arms == 0 {
            return Err(Error::invalid("arms", "need at least one arm"));
        }
        let policy: Box<dyn Policy> = match *self {
            PolicySpec::Phe { a } => Box::new(Phe::new(arms, a)),
            PolicySpec::Ucb1 => Box::new(Ucb1::new(arms)),
            PolicySpec::KlUcb { bisect_tol, max_iter } => Box::new(KlUcb::new(arms, bisect_tol, max_iter)),
            PolicySpec::Thompson => Box::new(Thompson::new(arms)),
            PolicySpec::Giro { a, exact_multinomial } => Box::new(Giro::new(arms, a, exact_multinomial)),
            PolicySpec::Fpl {
                learning_rate_scale,
                resample_cap,
            } => Box::new(Fpl::new(arms, learning_rate_scale, resample_cap)),
        };
        Ok(Agent::new(policy))
    }
}

/// One bandit policy's state and scoring rule.
pub trait Policy: Send {
    fn name(&self) -> &'static str;

    /// Statistics of every arm as seen by the policy.
    fn states(&self) -> &[ArmState];

    /// Writes the round-`t` score of every arm into `out`. Arms with zero
    /// pulls must get `+∞`.
    fn scores(&mut self, t: u64, rng: &mut Stream, out: &mut [f64]);

    /// Incorporates a validated reward in `[0, 1]` for `arm`.
    fn observe(&mut self, arm: usize, reward: f64, rng: &mut Stream);

    /// Number of random variates drawn while scoring so far; used to check
    /// that the per-round work does not grow with `t`.
    fn draw_count(&self) -> u64 {
        0
    }
}

/// A policy plus its scratch index vector: the uniform step/update driver.
pub struct Agent {
    policy: Box<dyn Policy>,
    index: IndexVector,
}

impl core::fmt::Debug for Agent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Agent")
            .field("policy", &self.policy.name())
            .field("states", &self.policy.states())
            .finish()
    }
}

impl Agent {
    pub fn new(policy: Box<dyn Policy>) -> Self {
        let arms = policy.states().len();
        Self {
            policy,
            index: IndexVector::new(arms),
        }
    }

    pub fn arms(&self) -> usize {
        self.index.len()
    }

    pub fn name(&self) -> &'static str {
        self.policy.name()
    }

    pub fn states(&self) -> &[ArmState] {
        self.policy.states()
    }

    pub fn draw_count(&self) -> u64 {
        self.policy.draw_count()
    }

    /// Scores from the most recent [`Agent::step`].
    pub fn last_index(&self) -> &IndexVector {
        &self.index
    }

    /// Chooses the arm to pull in round `t` (1-based).
    pub fn step(&mut self, t: u64, rng: &mut Stream) -> usize {
        self.policy.scores(t, rng, &mut self.index.0);
        select_arm(&self.index.0, rng).expect("agents have at least one arm")
    }

    /// Feeds back the reward observed for `arm`.
    pub fn update(&mut self, arm: usize, reward: f64, rng: &mut Stream) -> Result<()> {
        if arm >= self.arms() {
            return Err(Error::ArmOutOfRange { arm, arms: self.arms() });
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange(reward));
        }
        self.policy.observe(arm, reward, rng);
        Ok(())
    }
}
