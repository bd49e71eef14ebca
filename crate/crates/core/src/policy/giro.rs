use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{ArmState, Policy};
use crate::dist::{sample_binomial, BinomialParams};
use crate::math::pseudo_count;
use crate::rng::Stream;
use crate::{Error, Result};

/// Mean of one bootstrap resample of `history` augmented with `⌈a·s⌉` ones
/// and `⌈a·s⌉` zeros. The resample has the augmented size, so the work is
/// linear in the number of past observations.
pub fn giro_estimate<R: Rng + ?Sized>(history: &[f64], a: f64, exact_multinomial: bool, rng: &mut R) -> Result<f64> {
    let s = history.len();
    if s == 0 {
        return Err(Error::NoPulls);
    }
    let m = pseudo_count(a, s as u64) as usize;
    let total = s + 2 * m;
    let sum = if exact_multinomial {
        let mut sum = 0.0;
        for _ in 0..total {
            let idx = rng.random_range(0..total);
            sum += if idx < s {
                history[idx]
            } else if idx < s + m {
                1.0
            } else {
                0.0
            };
        }
        sum
    } else {
        // Multinomial block counts via conditional binomials, then resample
        // only the real rewards explicitly.
        let from_history = sample_binomial(
            BinomialParams::new(total as u64, s as f64 / total as f64).expect("ratio in [0, 1]"),
            rng,
        );
        let ones = sample_binomial(BinomialParams::fair(total as u64 - from_history), rng);
        let mut sum = ones as f64;
        if let Ok(len) = u32::try_from(s) {
            for _ in 0..from_history {
                sum += history[rng.random_range(0..len) as usize];
            }
        } else {
            for _ in 0..from_history {
                sum += history[rng.random_range(0..s)];
            }
        }
        sum
    };
    Ok(sum / total as f64)
}

/// Giro: bootstrap exploration over a pseudo-reward-augmented history.
#[derive(Debug, Clone)]
pub struct Giro {
    a: f64,
    exact_multinomial: bool,
    states: Vec<ArmState>,
    histories: Vec<Vec<f64>>,
}

impl Giro {
    pub fn new(arms: usize, a: f64, exact_multinomial: bool) -> Self {
        Self {
            a,
            exact_multinomial,
            states: vec![ArmState::default(); arms],
            histories: vec![Vec::new(); arms],
        }
    }
}

impl Policy for Giro {
    fn name(&self) -> &'static str {
        "Giro"
    }

    fn states(&self) -> &[ArmState] {
        &self.states
    }

    fn scores(&mut self, _t: u64, rng: &mut Stream, out: &mut [f64]) {
        for (score, history) in out.iter_mut().zip(&self.histories) {
            *score = if history.is_empty() {
                f64::INFINITY
            } else {
                giro_estimate(history, self.a, self.exact_multinomial, rng).expect("history is nonempty")
            };
        }
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut Stream) {
        self.states[arm].record(reward);
        self.histories[arm].push(reward);
    }
}
