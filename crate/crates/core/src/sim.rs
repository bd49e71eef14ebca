//! Episode loop and pseudo-regret bookkeeping.

use alloc::vec;
use alloc::vec::Vec;

use crate::env::BanditInstance;
use crate::policy::{Agent, PolicySpec};
use crate::rng::{derive_stream, SeedSpec, Stream};
use crate::Result;

/// Sub-stream used to generate problem `p`'s instance.
pub const INSTANCE_LANE: u64 = 0;
/// Sub-stream for environment rewards within one episode.
pub const ENV_LANE: u64 = 1;
/// Sub-stream for the policy's own randomness within one episode.
pub const POLICY_LANE: u64 = 2;

/// One policy on one instance for `horizon` rounds.
#[derive(Debug, Clone)]
pub struct EpisodeConfig {
    pub horizon: u64,
    pub policy: PolicySpec,
    pub instance: BanditInstance,
    pub seed: SeedSpec,
}

impl EpisodeConfig {
    /// The horizon is shorter than the initialization phase.
    pub fn short_horizon(&self) -> bool {
        self.horizon < self.instance.arms() as u64
    }
}

/// Cumulative pseudo-regret `R(t) = Σ_{ℓ≤t} Δ_{I_ℓ}` for `t = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretCurve {
    pub cumulative_regret: Vec<f64>,
    pub pull_counts: Vec<u64>,
}

impl RegretCurve {
    pub fn horizon(&self) -> usize {
        self.cumulative_regret.len()
    }

    /// `R(n)`, or 0 for an empty curve.
    pub fn final_regret(&self) -> f64 {
        self.cumulative_regret.last().copied().unwrap_or(0.0)
    }

    /// `R(t)` for 1-based `t`.
    pub fn at(&self, t: usize) -> f64 {
        self.cumulative_regret[t - 1]
    }
}

/// Stepwise driver of one episode; exposes each select/pull/update cycle so
/// callers can time or inspect individual rounds.
#[derive(Debug)]
pub struct Episode {
    instance: BanditInstance,
    agent: Agent,
    env_rng: Stream,
    policy_rng: Stream,
    horizon: u64,
    round: u64,
    regret: f64,
    curve: Vec<f64>,
    pulls: Vec<u64>,
}

impl Episode {
    pub fn new(config: &EpisodeConfig) -> Result<Self> {
        let agent = config.policy.build(config.instance.arms())?;
        Ok(Self::with_agent(
            config.instance.clone(),
            agent,
            config.seed,
            config.horizon,
        ))
    }

    /// Runs an arbitrary [`Agent`], e.g. a custom test policy.
    pub fn with_agent(instance: BanditInstance, agent: Agent, seed: SeedSpec, horizon: u64) -> Self {
        let arms = instance.arms();
        Self {
            instance,
            agent,
            env_rng: derive_stream(seed.with_lane(ENV_LANE)),
            policy_rng: derive_stream(seed.with_lane(POLICY_LANE)),
            horizon,
            round: 0,
            regret: 0.0,
            curve: Vec::with_capacity(horizon as usize),
            pulls: vec![0; arms],
        }
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn is_done(&self) -> bool {
        self.round >= self.horizon
    }

    pub fn agent(&self) -> &Agent {
        &self.agent
    }

    /// Plays one round and returns the pulled arm.
    pub fn step(&mut self) -> Result<usize> {
        self.round += 1;
        let arm = self.agent.step(self.round, &mut self.policy_rng);
        let reward = self.instance.pull(arm, &mut self.env_rng)?;
        self.agent.update(arm, reward, &mut self.policy_rng)?;
        self.regret += self.instance.gaps()[arm];
        self.curve.push(self.regret);
        self.pulls[arm] += 1;
        Ok(arm)
    }

    /// Plays rounds until round `t` (inclusive) or the horizon.
    pub fn run_until(&mut self, t: u64) -> Result<()> {
        while self.round < t.min(self.horizon) {
            self.step()?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<RegretCurve> {
        self.run_until(self.horizon)?;
        Ok(RegretCurve {
            cumulative_regret: self.curve,
            pull_counts: self.pulls,
        })
    }
}

/// Runs `config.horizon` rounds and returns the pseudo-regret curve.
pub fn run_episode(config: &EpisodeConfig) -> Result<RegretCurve> {
    Episode::new(config)?.finish()
}

/// Per-round mean and standard error of several regret curves.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSummary {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub count: usize,
}

impl CurveSummary {
    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }

    pub fn final_stderr(&self) -> f64 {
        self.stderr.last().copied().unwrap_or(0.0)
    }
}

/// Averages equal-length curves in the given order. The standard error uses
/// the unbiased sample variance and is zero for a single curve.
pub fn summarize(curves: &[RegretCurve]) -> CurveSummary {
    let count = curves.len();
    let len = curves.iter().map(RegretCurve::horizon).min().unwrap_or(0);
    let mut mean = vec![0.0; len];
    let mut stderr = vec![0.0; len];
    if count == 0 {
        return CurveSummary { mean, stderr, count };
    }
    for c in curves {
        for (m, &r) in mean.iter_mut().zip(&c.cumulative_regret) {
            *m += r;
        }
    }
    let n = count as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    if count > 1 {
        for c in curves {
            for ((s, &m), &r) in stderr.iter_mut().zip(&mean).zip(&c.cumulative_regret) {
                *s += (r - m) * (r - m);
            }
        }
        stderr
            .iter_mut()
            .for_each(|s| *s = libm::sqrt(*s / (n - 1.0)) / libm::sqrt(n));
    }
    CurveSummary { mean, stderr, count }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::BanditInstance;

    fn config(policy: PolicySpec, means: Vec<f64>, horizon: u64) -> EpisodeConfig {
        EpisodeConfig {
            horizon,
            policy,
            instance: BanditInstance::bernoulli(means).unwrap(),
            seed: SeedSpec::new(3, 0, 0),
        }
    }

    #[test]
    fn single_arm_has_zero_regret() {
        let curve = run_episode(&config(PolicySpec::Phe { a: 1.1 }, vec![0.4], 500)).unwrap();
        assert_eq!(curve.horizon(), 500);
        assert!(curve.cumulative_regret.iter().all(|&r| r == 0.0));
        assert_eq!(curve.pull_counts, vec![500]);
    }

    #[test]
    fn curve_is_monotone_and_bounded() {
        let cfg = config(PolicySpec::Phe { a: 2.1 }, vec![0.3, 0.6, 0.5, 0.55], 2000);
        let curve = run_episode(&cfg).unwrap();
        let dmax = cfg.instance.max_gap();
        let mut prev = 0.0;
        for (i, &r) in curve.cumulative_regret.iter().enumerate() {
            assert!(r >= prev);
            assert!(r <= (i + 1) as f64 * dmax + 1e-9);
            prev = r;
        }
        assert_eq!(curve.pull_counts.iter().sum::<u64>(), 2000);
    }

    #[test]
    fn episodes_are_reproducible() {
        let cfg = config(PolicySpec::Thompson, vec![0.3, 0.6], 300);
        assert_eq!(run_episode(&cfg).unwrap(), run_episode(&cfg).unwrap());
    }

    #[test]
    fn short_horizon_flag() {
        assert!(config(PolicySpec::Ucb1, vec![0.1, 0.2, 0.3], 2).short_horizon());
        assert!(!config(PolicySpec::Ucb1, vec![0.1, 0.2, 0.3], 3).short_horizon());
    }

    #[test]
    fn summary_of_one_curve() {
        let curve = run_episode(&config(PolicySpec::Ucb1, vec![0.2, 0.7], 100)).unwrap();
        let s = summarize(core::slice::from_ref(&curve));
        assert_eq!(s.mean, curve.cumulative_regret);
        assert!(s.stderr.iter().all(|&e| e == 0.0));
        assert_eq!(s.count, 1);
    }

    #[test]
    fn summary_mean_and_stderr() {
        let a = RegretCurve {
            cumulative_regret: vec![1.0, 2.0],
            pull_counts: vec![],
        };
        let b = RegretCurve {
            cumulative_regret: vec![3.0, 6.0],
            pull_counts: vec![],
        };
        let s = summarize(&[a, b]);
        assert_eq!(s.mean, vec![2.0, 4.0]);
        // sample sd of {1,3} is sqrt(2); divided by sqrt(2) gives 1.
        assert!((s.stderr[0] - 1.0).abs() < 1e-15);
        assert!((s.stderr[1] - 2.0).abs() < 1e-15);
    }
}
