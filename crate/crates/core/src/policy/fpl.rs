use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::{select_arm, ArmState, Policy};
use crate::rng::Stream;

/// Upper limit on geometric-resampling rounds when no explicit cap is set.
pub const FPL_MAX_RESAMPLE: u64 = 10_000;

/// `η_t = scale · sqrt(ln K / (t K))`.
pub fn fpl_learning_rate(scale: f64, arms: usize, t: u64) -> f64 {
    let k = arms as f64;
    scale * libm::sqrt(libm::log(k) / (t.max(1) as f64 * k))
}

/// Perturbed leader: `argmin_i η·L̂_i − Z_i` with `Z_i ~ Exp(1)`.
pub fn fpl_select<R: Rng + ?Sized>(losses: &[f64], eta: f64, rng: &mut R, scratch: &mut Vec<f64>) -> usize {
    scratch.clear();
    scratch.extend(losses.iter().map(|&l| {
        let z: f64 = Exp1.sample(rng);
        z - eta * l
    }));
    select_arm(scratch, rng).expect("at least one arm")
}

/// Number of fresh perturbed-leader draws until `arm` is selected again,
/// capped at `cap`. Its expectation is `min(1/p, cap)`-like, where `p` is
/// the probability that `arm` is the perturbed leader.
pub fn geometric_resample<R: Rng + ?Sized>(
    losses: &[f64],
    eta: f64,
    arm: usize,
    cap: u64,
    rng: &mut R,
    scratch: &mut Vec<f64>,
) -> u64 {
    for g in 1..cap {
        if fpl_select(losses, eta, rng, scratch) == arm {
            return g;
        }
    }
    cap.max(1)
}

/// Follow the perturbed leader with exponential noise and geometric
/// resampling loss estimates.
#[derive(Debug, Clone)]
pub struct Fpl {
    scale: f64,
    cap: Option<u64>,
    losses: Vec<f64>,
    states: Vec<ArmState>,
    eta: f64,
    scratch: Vec<f64>,
}

impl Fpl {
    pub fn new(arms: usize, learning_rate_scale: f64, resample_cap: Option<u64>) -> Self {
        Self {
            scale: learning_rate_scale,
            cap: resample_cap,
            losses: vec![0.0; arms],
            states: vec![ArmState::default(); arms],
            eta: 0.0,
            scratch: Vec::with_capacity(arms),
        }
    }

    pub fn loss_estimates(&self) -> &[f64] {
        &self.losses
    }

    fn cap(&self) -> u64 {
        self.cap.unwrap_or_else(|| {
            let k = self.losses.len() as f64;
            if self.eta > 0.0 {
                (libm::ceil(k / self.eta) as u64).clamp(1, FPL_MAX_RESAMPLE)
            } else {
                FPL_MAX_RESAMPLE
            }
        })
    }
}

impl Policy for Fpl {
    fn name(&self) -> &'static str {
        "FPL"
    }

    fn states(&self) -> &[ArmState] {
        &self.states
    }

    fn scores(&mut self, t: u64, rng: &mut Stream, out: &mut [f64]) {
        self.eta = fpl_learning_rate(self.scale, self.losses.len(), t);
        for ((score, &loss), state) in out.iter_mut().zip(&self.losses).zip(&self.states) {
            *score = if state.pulls == 0 {
                f64::INFINITY
            } else {
                let z: f64 = Exp1.sample(rng);
                z - self.eta * loss
            };
        }
    }

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut Stream) {
        let loss = 1.0 - reward;
        // Initialization pulls are forced, so their loss enters with weight 1.
        let weight = if self.states[arm].pulls == 0 {
            1
        } else {
            let cap = self.cap();
            geometric_resample(&self.losses, self.eta, arm, cap, rng, &mut self.scratch)
        };
        self.losses[arm] += loss * weight as f64;
        self.states[arm].record(reward);
    }
}
