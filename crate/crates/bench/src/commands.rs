//! The `run`, `verify` and `bench` subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{BenchConfig, ExperimentConfig, VerifyConfig};
use crate::experiment::run_experiment;
use crate::output::{
    create_dir, manifest, slug, write_checks_csv, write_regret_csv, write_summary_csv, write_text, write_timing_csv,
};
use crate::plot::regret_chart;
use crate::timing::time_policies;
use crate::verify::{mandatory_failures, run_checks};
use crate::Result;

/// Options shared by all subcommands; CLI values override config values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs a regret experiment and writes its CSVs, manifest and plot.
/// Returns the files written.
pub fn cmd_run(config_path: &Path, out: &Path, overrides: &Overrides) -> Result<Vec<PathBuf>> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = overrides.seed {
        config.master_seed = seed;
    }
    let workers = overrides.workers.or(config.workers).unwrap_or_else(default_workers);
    // Results do not depend on the worker count, so it is not part of the
    // recorded config.
    config.workers = None;
    if config.horizon < config.arms as u64 {
        eprintln!(
            "warning: horizon {} is shorter than the {} initialization rounds",
            config.horizon, config.arms
        );
    }
    create_dir(out)?;

    let start = Instant::now();
    let results = run_experiment(
        &config.problem_spec(),
        &config.specs(),
        config.horizon,
        config.num_problems,
        config.master_seed,
        workers,
    )?;
    eprintln!(
        "{}: {} problems x {} policies in {:.1}s",
        config.name,
        config.num_problems,
        config.policies.len(),
        start.elapsed().as_secs_f64()
    );

    let mut files = Vec::new();
    for (j, (policy, result)) in config.policies.iter().zip(&results).enumerate() {
        eprintln!(
            "  {:<14} final regret {:>9.2} +- {:<7.2} episode time {:.2}s",
            policy.label,
            result.summary.final_mean(),
            result.summary.final_stderr(),
            result.wall_clock.as_secs_f64()
        );
        let path = out.join(format!("regret_{:02}_{}.csv", j + 1, slug(&policy.label)));
        write_regret_csv(&path, &result.summary)?;
        files.push(path);
    }
    let rows: Vec<_> = config
        .policies
        .iter()
        .zip(&results)
        .map(|(p, r)| (p.label.as_str(), &r.summary))
        .collect();
    let summary = out.join("summary.csv");
    write_summary_csv(&summary, &rows)?;
    files.push(summary);

    let series: Vec<_> = rows.iter().map(|(l, s)| (*l, s.mean.as_slice())).collect();
    let plot = out.join("regret.svg");
    write_text(&plot, &regret_chart(&config.name, &series))?;
    files.push(plot);

    let config_copy = out.join("config.toml");
    write_text(&config_copy, &config.to_toml())?;
    files.push(config_copy);

    let manifest_path = out.join("manifest.toml");
    write_text(&manifest_path, &manifest(&config, &files))?;
    files.push(manifest_path);
    Ok(files)
}

/// Outcome of `verify`: number of rows and of failed mandatory checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub rows: usize,
    pub failures: usize,
}

pub fn cmd_verify(config_path: Option<&Path>, out: &Path) -> Result<VerifyOutcome> {
    let config = match config_path {
        Some(p) => VerifyConfig::load(p)?,
        None => VerifyConfig::default(),
    };
    create_dir(out)?;
    let rows = run_checks(&config);
    write_checks_csv(&out.join("checks.csv"), &rows)?;
    let failures = mandatory_failures(&rows);
    for r in rows.iter().filter(|r| r.is_failure()).take(20) {
        eprintln!(
            "FAIL {} [{}]: lhs={} rhs={} {}",
            r.check, r.params, r.lhs, r.rhs, r.note
        );
    }
    for r in rows.iter().filter(|r| !r.mandatory) {
        eprintln!("info {} [{}]: {} {}", r.check, r.params, r.lhs, r.note);
    }
    eprintln!("{} checks, {failures} mandatory failures", rows.len());
    Ok(VerifyOutcome {
        rows: rows.len(),
        failures,
    })
}

pub fn cmd_bench(
    config_path: Option<&Path>,
    out: &Path,
    overrides: &Overrides,
) -> Result<Vec<crate::timing::TimingRow>> {
    let mut config = match config_path {
        Some(p) => BenchConfig::load(p)?,
        None => BenchConfig::default(),
    };
    if let Some(seed) = overrides.seed {
        config.master_seed = seed;
    }
    create_dir(out)?;
    let rows = time_policies(&config)?;
    for r in &rows {
        eprintln!(
            "{:<12} K={:<3} n={:<6} total {:.4}s  last/first decile {:.2}",
            r.policy,
            r.arms,
            r.horizon,
            r.total_seconds,
            r.decile_ratio()
        );
    }
    write_timing_csv(&out.join("timing.csv"), &rows)?;
    Ok(rows)
}
