//! Parallel regret experiments over randomly generated problems.

use std::time::{Duration, Instant};

use phe_core::env::{generate_problem, BanditInstance, ProblemGenSpec};
use phe_core::policy::PolicySpec;
use phe_core::rng::{derive_stream, SeedSpec};
use phe_core::sim::{run_episode, summarize, CurveSummary, EpisodeConfig, RegretCurve, INSTANCE_LANE};
use rayon::prelude::*;

use crate::Result;

/// Mean regret curve of one policy across all problems.
#[derive(Debug, Clone)]
pub struct AggregateResult {
    pub summary: CurveSummary,
    /// Summed episode time of this policy across workers.
    pub wall_clock: Duration,
}

/// Instance for problem `p`; identical for every policy.
pub fn problem_instance(spec: &ProblemGenSpec, master_seed: u64, problem: u64) -> Result<BanditInstance> {
    let mut rng = derive_stream(SeedSpec::new(master_seed, problem, 0).with_lane(INSTANCE_LANE));
    Ok(generate_problem(spec, &mut rng)?)
}

/// Episode seed of policy `j` on problem `p`. Episodes draw their reward and
/// policy streams from lanes other than the instance lane.
pub fn episode_seed(master_seed: u64, problem: u64, policy: usize) -> SeedSpec {
    SeedSpec::new(master_seed, problem, policy as u64)
}

/// Runs every policy on `num_problems` generated instances, using at most
/// `workers` threads. Aggregation walks problems in index order, so the
/// result does not depend on `workers`.
pub fn run_experiment(
    spec: &ProblemGenSpec,
    policies: &[PolicySpec],
    horizon: u64,
    num_problems: u64,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<AggregateResult>> {
    spec.validate()?;
    for p in policies {
        p.validate()?;
    }
    let instances = (0..num_problems)
        .map(|p| problem_instance(spec, master_seed, p))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(u64, usize)> = (0..num_problems)
        .flat_map(|p| (0..policies.len()).map(move |j| (p, j)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let outcomes: Vec<phe_core::Result<(RegretCurve, Duration)>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(p, j)| {
                let config = EpisodeConfig {
                    horizon,
                    policy: policies[j].clone(),
                    instance: instances[p as usize].clone(),
                    seed: episode_seed(master_seed, p, j),
                };
                let start = Instant::now();
                let curve = run_episode(&config)?;
                Ok((curve, start.elapsed()))
            })
            .collect()
    });

    let mut per_policy: Vec<(Vec<RegretCurve>, Duration)> =
        (0..policies.len()).map(|_| (Vec::new(), Duration::ZERO)).collect();
    for (&(_, j), outcome) in tasks.iter().zip(outcomes) {
        let (curve, elapsed) = outcome?;
        per_policy[j].0.push(curve);
        per_policy[j].1 += elapsed;
    }
    Ok(per_policy
        .into_iter()
        .map(|(curves, wall_clock)| AggregateResult {
            summary: summarize(&curves),
            wall_clock,
        })
        .collect())
}
