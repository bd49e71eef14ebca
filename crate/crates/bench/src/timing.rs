//! Wall-clock cost of policies over a (K, n) grid.

use std::time::{Duration, Instant};

use phe_core::env::ProblemGenSpec;
use phe_core::sim::{Episode, EpisodeConfig};

use crate::config::{BenchConfig, LabeledPolicy};
use crate::experiment::{episode_seed, problem_instance};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub policy: String,
    pub arms: usize,
    pub horizon: u64,
    /// Summed over the timed repeats; the warm-up episode is excluded.
    pub total_seconds: f64,
    /// Mean seconds per round over the first 10% of rounds.
    pub first_decile_per_round: f64,
    /// Mean seconds per round over the last 10% of rounds.
    pub last_decile_per_round: f64,
}

impl TimingRow {
    pub fn decile_ratio(&self) -> f64 {
        self.last_decile_per_round / self.first_decile_per_round
    }
}

struct EpisodeTiming {
    total: Duration,
    first: Duration,
    last: Duration,
}

fn timed_episode(config: &EpisodeConfig) -> Result<EpisodeTiming> {
    let n = config.horizon;
    let decile = (n / 10).max(1);
    let mut episode = Episode::new(config)?;
    let start = Instant::now();
    episode.run_until(decile)?;
    let first = start.elapsed();
    episode.run_until(n - decile)?;
    let mark = Instant::now();
    episode.run_until(n)?;
    let end = Instant::now();
    std::hint::black_box(episode.finish()?);
    Ok(EpisodeTiming {
        total: end - start,
        first,
        last: end - mark,
    })
}

/// Times each policy at every `(K, n)` grid point, one thread, one warm-up
/// episode discarded per point. Repeat `r` runs on generated problem `r`.
pub fn time_policies(config: &BenchConfig) -> Result<Vec<TimingRow>> {
    let mut rows = Vec::new();
    for (j, policy) in config.policies.iter().enumerate() {
        for &arms in &config.arms {
            for &horizon in &config.horizons {
                rows.push(time_point(config, j, policy, arms, horizon)?);
            }
        }
    }
    Ok(rows)
}

fn time_point(config: &BenchConfig, j: usize, policy: &LabeledPolicy, arms: usize, horizon: u64) -> Result<TimingRow> {
    let spec = ProblemGenSpec {
        arms,
        mean_low: config.mean_interval[0],
        mean_high: config.mean_interval[1],
        family: config.environment,
    };
    let episode = |problem: u64| -> Result<EpisodeConfig> {
        Ok(EpisodeConfig {
            horizon,
            policy: policy.spec.clone(),
            instance: problem_instance(&spec, config.master_seed, problem)?,
            seed: episode_seed(config.master_seed, problem, j),
        })
    };
    timed_episode(&episode(u64::from(config.repeats))?)?;
    let (mut total, mut first, mut last) = (Duration::ZERO, Duration::ZERO, Duration::ZERO);
    for r in 0..config.repeats {
        let t = timed_episode(&episode(u64::from(r))?)?;
        total += t.total;
        first += t.first;
        last += t.last;
    }
    let decile_rounds = ((horizon / 10).max(1) * u64::from(config.repeats)) as f64;
    Ok(TimingRow {
        policy: policy.label.clone(),
        arms,
        horizon,
        total_seconds: total.as_secs_f64(),
        first_decile_per_round: first.as_secs_f64() / decile_rounds,
        last_decile_per_round: last.as_secs_f64() / decile_rounds,
    })
}
