use alloc::vec;
use alloc::vec::Vec;

use super::{binarize, ArmState, Policy};
use crate::rng::Stream;

/// UCB1 index `V/s + sqrt(2 ln t / s)`; `+∞` before the first pull.
pub fn ucb1_index(state: ArmState, t: u64) -> f64 {
    if state.pulls == 0 {
        return f64::INFINITY;
    }
    let s = state.pulls as f64;
    let t = t.max(1) as f64;
    state.reward_sum / s + libm::sqrt(2.0 * libm::log(t) / s)
}

/// Bernoulli KL divergence `kl(p, q)`.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    fn term(x: f64, y: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else if y == 0.0 {
            f64::INFINITY
        } else {
            x * libm::log(x / y)
        }
    }
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// KL-UCB index: the largest `q ∈ [V/s, 1]` with `s·kl(V/s, q) <= ln t`,
/// located by bisection to within `tol`.
pub fn klucb_index(state: ArmState, t: u64, tol: f64, max_iter: u32) -> f64 {
    let Some(p) = state.mean() else {
        return f64::INFINITY;
    };
    klucb_upper(p, state.pulls, libm::log(t.max(1) as f64), tol, max_iter)
}

/// Largest `q ∈ [p, 1]` with `pulls·kl(p, q) <= exploration`.
pub fn klucb_upper(p: f64, pulls: u64, exploration: f64, tol: f64, max_iter: u32) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let budget = exploration / pulls as f64;
    if p >= 1.0 {
        return 1.0;
    }
    if budget <= 0.0 {
        return p;
    }
    let (mut lo, mut hi) = (p, 1.0);
    let mut iter = 0;
    while hi - lo > tol && iter < max_iter {
        let mid = 0.5 * (lo + hi);
        if bernoulli_kl(p, mid) > budget {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    lo
}

#[derive(Debug, Clone)]
pub struct Ucb1 {
    states: Vec<ArmState>,
}

impl Ucb1 {
    pub fn new(arms: usize) -> Self {
        Self {
            states: vec![ArmState::default(); arms],
        }
    }
}

impl Policy for Ucb1 {
    fn name(&self) -> &'static str {
        "UCB1"
    }

    fn states(&self) -> &[ArmState] {
        &self.states
    }

    fn scores(&mut self, t: u64, _rng: &mut Stream, out: &mut [f64]) {
        for (score, state) in out.iter_mut().zip(&self.states) {
            *score = ucb1_index(*state, t);
        }
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut Stream) {
        self.states[arm].record(reward);
    }
}

/// KL-UCB on binarized rewards.
#[derive(Debug, Clone)]
pub struct KlUcb {
    tol: f64,
    max_iter: u32,
    states: Vec<ArmState>,
}

impl KlUcb {
    pub fn new(arms: usize, tol: f64, max_iter: u32) -> Self {
        Self {
            tol,
            max_iter,
            states: vec![ArmState::default(); arms],
        }
    }
}

impl Policy for KlUcb {
    fn name(&self) -> &'static str {
        "KL-UCB"
    }

    fn states(&self) -> &[ArmState] {
        &self.states
    }

    fn scores(&mut self, t: u64, _rng: &mut Stream, out: &mut [f64]) {
        for (score, state) in out.iter_mut().zip(&self.states) {
            *score = klucb_index(*state, t, self.tol, self.max_iter);
        }
    }

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut Stream) {
        let y = binarize(reward, rng);
        self.states[arm].record(y);
    }
}
