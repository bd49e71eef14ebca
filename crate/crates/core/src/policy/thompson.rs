use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{ArmState, Policy};
use crate::dist::sample_beta;
use crate::rng::Stream;

/// Posterior sample from `Beta(1 + successes, 1 + failures)`.
pub fn thompson_sample<R: Rng + ?Sized>(successes: f64, failures: f64, rng: &mut R) -> f64 {
    sample_beta(1.0 + successes.max(0.0), 1.0 + failures.max(0.0), rng).expect("posterior shapes are >= 1")
}

/// Returns `1` with probability `y` and `0` otherwise.
pub fn binarize<R: Rng + ?Sized>(y: f64, rng: &mut R) -> f64 {
    if rng.random::<f64>() < y {
        1.0
    } else {
        0.0
    }
}

/// Bernoulli Thompson sampling on binarized rewards.
#[derive(Debug, Clone)]
pub struct Thompson {
    states: Vec<ArmState>,
}

impl Thompson {
    pub fn new(arms: usize) -> Self {
        Self {
            states: vec![ArmState::default(); arms],
        }
    }
}

impl Policy for Thompson {
    fn name(&self) -> &'static str {
        "TS"
    }

    fn states(&self) -> &[ArmState] {
        &self.states
    }

    fn scores(&mut self, _t: u64, rng: &mut Stream, out: &mut [f64]) {
        for (score, state) in out.iter_mut().zip(&self.states) {
            *score = if state.pulls == 0 {
                f64::INFINITY
            } else {
                let successes = state.reward_sum;
                thompson_sample(successes, state.pulls as f64 - successes, rng)
            };
        }
    }

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut Stream) {
        let y = binarize(reward, rng);
        self.states[arm].record(y);
    }
}
