use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{ArmState, Policy};
use crate::dist::{sample_binomial, BinomialParams, BinomialSampler};
use crate::math::pseudo_count;
use crate::rng::Stream;
use crate::{Error, Result};

/// Sum of `⌈a·s⌉` fresh Bernoulli(½) pseudo-rewards, i.e. one
/// `Binomial(⌈a·s⌉, ½)` draw.
pub fn phe_pseudo_sum<R: Rng + ?Sized>(pulls: u64, a: f64, rng: &mut R) -> u64 {
    sample_binomial(BinomialParams::fair(pseudo_count(a, pulls)), rng)
}

/// Mean of the perturbed history: `(V + U) / (s + ⌈a·s⌉)`.
pub fn phe_estimate(state: ArmState, pseudo_sum: u64, a: f64) -> Result<f64> {
    if state.pulls == 0 {
        return Err(Error::NoPulls);
    }
    let m = pseudo_count(a, state.pulls);
    if pseudo_sum > m {
        return Err(Error::invalid("pseudo_sum", "exceeds the number of pseudo-rewards"));
    }
    Ok((state.reward_sum + pseudo_sum as f64) / (state.pulls + m) as f64)
}

/// Perturbed-history exploration. Keeps only `(s, V)` per arm.
#[derive(Debug, Clone)]
pub struct Phe {
    a: f64,
    states: Vec<ArmState>,
    /// `Binomial(⌈a·s⌉, ½)` for each arm's current `s`.
    samplers: Vec<BinomialSampler>,
    draws: u64,
}

impl Phe {
    pub fn new(arms: usize, a: f64) -> Self {
        Self {
            a,
            states: vec![ArmState::default(); arms],
            samplers: vec![BinomialSampler::new(BinomialParams::fair(0)); arms],
            draws: 0,
        }
    }
}

impl Policy for Phe {
    fn name(&self) -> &'static str {
        "PHE"
    }

    fn states(&self) -> &[ArmState] {
        &self.states
    }

    fn scores(&mut self, _t: u64, rng: &mut Stream, out: &mut [f64]) {
        for ((score, state), sampler) in out.iter_mut().zip(&self.states).zip(&self.samplers) {
            *score = if state.pulls == 0 {
                f64::INFINITY
            } else {
                self.draws += 1;
                let u = sampler.sample(rng);
                let m = pseudo_count(self.a, state.pulls);
                (state.reward_sum + u as f64) / (state.pulls + m) as f64
            };
        }
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut Stream) {
        self.states[arm].record(reward);
        let m = pseudo_count(self.a, self.states[arm].pulls);
        self.samplers[arm] = BinomialSampler::new(BinomialParams::fair(m));
    }

    fn draw_count(&self) -> u64 {
        self.draws
    }
}
