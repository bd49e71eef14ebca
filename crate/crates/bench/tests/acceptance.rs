//! Acceptance suite: one sequential run over every criterion, printing one
//! PASS/FAIL line per criterion. Run with `--nocapture` to see the lines.
#![allow(clippy::excessive_precision)]

use std::path::{Path, PathBuf};

use phe_bench::commands::{cmd_run, cmd_verify, Overrides};
use phe_bench::config::{BenchConfig, ExperimentConfig, VerifyConfig};
use phe_bench::experiment::run_experiment;
use phe_bench::timing::{time_policies, TimingRow};
use phe_bench::verify::run_checks;
use phe_core::dist::{sample_beta, sample_binomial, BinomialParams};
use phe_core::env::BanditInstance;
use phe_core::policy::{giro_estimate, select_arm, PolicySpec};
use phe_core::rng::{derive_stream, SeedSpec, Stream};
use phe_core::sim::{run_episode, summarize, EpisodeConfig};
use phe_core::theory::{
    constant_c_rows, gap_dependent_bound, gap_free_bound, hoeffding_grid, lemma2_grid, lemma3_grid, theorem4_grid,
    BoundInputs, Lemma2Family, TheoryCheckReport,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const ALPHA: f64 = 1e-3;
const SAMPLES: usize = 100_000;

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Final regrets and R(n/2) per policy label.
struct RegretTable {
    labels: Vec<String>,
    finals: Vec<f64>,
    halves: Vec<f64>,
}

impl RegretTable {
    fn run(config: &ExperimentConfig) -> Self {
        let results = run_experiment(
            &config.problem_spec(),
            &config.specs(),
            config.horizon,
            config.num_problems,
            config.master_seed,
            workers(),
        )
        .unwrap();
        let half = (config.horizon / 2) as usize;
        Self {
            labels: config.policies.iter().map(|p| p.label.clone()).collect(),
            finals: results.iter().map(|r| r.summary.final_mean()).collect(),
            halves: results.iter().map(|r| r.summary.mean[half - 1]).collect(),
        }
    }

    fn index(&self, label: &str) -> usize {
        self.labels
            .iter()
            .position(|l| l == label)
            .unwrap_or_else(|| panic!("no policy {label}"))
    }

    fn fin(&self, label: &str) -> f64 {
        self.finals[self.index(label)]
    }

    fn growth(&self, label: &str) -> f64 {
        let i = self.index(label);
        self.finals[i] / self.halves[i]
    }

    fn describe(&self) -> String {
        self.labels
            .iter()
            .zip(&self.finals)
            .map(|(l, r)| format!("{l}={r:.1}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn ordering(id: u32, table: &RegretTable) -> Outcome {
    let phe = table.fin("PHE(a=1.1)");
    let beaten = ["UCB1", "KL-UCB", "Giro(a=1)", "FPL"]
        .iter()
        .all(|l| phe < table.fin(l));
    let ts = table.fin("TS");
    Outcome {
        id,
        pass: beaten && phe <= 1.3 * ts,
        detail: format!("PHE(a=1.1)/TS = {:.3}; {}", phe / ts, table.describe()),
    }
}

fn linear_failure(table: &RegretTable) -> Outcome {
    let low = table.growth("PHE(a=0.5)");
    let high = table.growth("PHE(a=2.1)");
    Outcome {
        id: 2,
        pass: low >= 1.7 && high <= 1.4,
        detail: format!("R(n)/R(n/2): PHE(a=0.5) = {low:.3} (>= 1.7), PHE(a=2.1) = {high:.3} (<= 1.4)"),
    }
}

fn runtime(rows: &[TimingRow]) -> Outcome {
    let find = |policy: &str, k: usize, n: u64| {
        rows.iter()
            .find(|r| r.policy == policy && r.arms == k && r.horizon == n)
            .unwrap_or_else(|| panic!("no timing row {policy} {k} {n}"))
    };
    let mut failures = Vec::new();
    let mut worst_phe_ts: f64 = 0.0;
    let mut min_giro_phe = f64::INFINITY;
    let mut worst_phe_decile: f64 = 0.0;
    let mut min_giro_decile = f64::INFINITY;
    for &k in &[5, 10, 20] {
        for &n in &[1_000, 10_000] {
            let phe = find("PHE(a=1.1)", k, n);
            let ts = find("TS", k, n);
            let giro = find("Giro(a=1)", k, n);
            let phe_ts = phe.total_seconds / ts.total_seconds;
            worst_phe_ts = worst_phe_ts.max(phe_ts);
            worst_phe_decile = worst_phe_decile.max(phe.decile_ratio());
            if phe_ts > 2.0 {
                failures.push(format!("PHE/TS={phe_ts:.2} at K={k} n={n}"));
            }
            if phe.decile_ratio() > 2.0 {
                failures.push(format!("PHE decile ratio {:.2} at K={k} n={n}", phe.decile_ratio()));
            }
            if n == 10_000 {
                let giro_phe = giro.total_seconds / phe.total_seconds;
                min_giro_phe = min_giro_phe.min(giro_phe);
                min_giro_decile = min_giro_decile.min(giro.decile_ratio());
                if giro_phe < 4.0 {
                    failures.push(format!("Giro/PHE={giro_phe:.2} at K={k}"));
                }
                if giro.decile_ratio() < 3.0 {
                    failures.push(format!("Giro decile ratio {:.2} at K={k}", giro.decile_ratio()));
                }
            }
        }
    }
    Outcome {
        id: 4,
        pass: failures.is_empty(),
        detail: format!(
            "max PHE/TS = {worst_phe_ts:.2}, min Giro/PHE (n=1e4) = {min_giro_phe:.1}, \
             max PHE decile ratio = {worst_phe_decile:.2}, min Giro decile ratio (n=1e4) = {min_giro_decile:.1} {}",
            failures.join("; ")
        ),
    }
}

fn grid_outcome(id: u32, rows: &[TheoryCheckReport], expected: usize) -> Outcome {
    let failures: Vec<_> = rows.iter().filter(|r| r.is_failure()).collect();
    Outcome {
        id,
        pass: failures.is_empty() && rows.len() >= expected,
        detail: format!(
            "{} rows (at least {expected}), {} failures{}",
            rows.len(),
            failures.len(),
            failures
                .first()
                .map(|r| format!("; first: {} [{}]", r.check, r.params))
                .unwrap_or_default()
        ),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn bound_regression() -> Outcome {
    let pinned = [
        (
            "gap_dependent(a=2.1, 9x0.25, n=1e4)",
            gap_dependent_bound(&BoundInputs {
                a: 2.1,
                gaps: vec![0.25; 9],
                horizon: 10_000,
            }),
            1.131_293_576_107_285_658_6e75,
        ),
        (
            "gap_dependent(a=6, {0.1,0.3,0.5}, n=1e3)",
            gap_dependent_bound(&BoundInputs {
                a: 6.0,
                gaps: vec![0.1, 0.3, 0.5],
                horizon: 1000,
            }),
            14_175_600.309_340_190_353,
        ),
        (
            "gap_free(a=2.1, K=10, n=1e4)",
            gap_free_bound(2.1, 10, 10_000),
            3.545_409_514_204_852_062_1e39,
        ),
        (
            "gap_free(a=6, K=10, n=1e4)",
            gap_free_bound(6.0, 10, 10_000),
            702_235.304_648_285_286_28,
        ),
    ];
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, value, expected) in pinned {
        let e = rel(value.unwrap(), expected);
        worst = worst.max(e);
        if e > 1e-10 {
            failures.push(name.to_string());
        }
    }

    // PHE(a=2.1) on a pinned 10-arm instance, 20 runs.
    let means = vec![0.75, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5];
    let instance = BanditInstance::bernoulli(means).unwrap();
    let gaps: Vec<f64> = instance.gaps().iter().copied().filter(|&g| g > 0.0).collect();
    let curves: Vec<_> = (0..20)
        .map(|r| {
            run_episode(&EpisodeConfig {
                horizon: 10_000,
                policy: PolicySpec::Phe { a: 2.1 },
                instance: instance.clone(),
                seed: SeedSpec::new(2019, 0, r),
            })
            .unwrap()
        })
        .collect();
    let summary = summarize(&curves);
    let mut checkpoints = 0;
    for t in (10..=10_000).step_by(10) {
        let bound = gap_dependent_bound(&BoundInputs {
            a: 2.1,
            gaps: gaps.clone(),
            horizon: t as u64,
        })
        .unwrap();
        checkpoints += 1;
        if summary.mean[t - 1] > bound || curves.iter().any(|c| c.at(t) > bound) {
            failures.push(format!("regret above bound at t={t}"));
            break;
        }
    }
    Outcome {
        id: 9,
        pass: failures.is_empty(),
        detail: format!(
            "max rel err of pinned bounds = {worst:.1e}; R(1e4) = {:.1} within bound at {checkpoints} checkpoints {}",
            summary.final_mean(),
            failures.join("; ")
        ),
    }
}

fn chi2_critical(dof: usize) -> f64 {
    ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - ALPHA)
}

/// Pearson statistic with cells of expected count < 5 pooled; returns
/// (statistic, critical value).
fn chi2(observed: &[u64], probs: &[f64]) -> (f64, f64) {
    let total = observed.iter().sum::<u64>() as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        o_acc += o as f64;
        e_acc += p * total;
        if e_acc >= 5.0 {
            cells.push((o_acc, e_acc));
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if let Some(last) = cells.last_mut() {
        last.0 += o_acc;
        last.1 += e_acc;
    }
    let stat = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    (stat, chi2_critical(cells.len().saturating_sub(1).max(1)))
}

fn pmf(k: u64, n: u64, p: f64) -> f64 {
    let mut c = 1.0f64;
    for i in 0..k {
        c *= (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

fn histogram(values: impl Iterator<Item = usize>, cells: usize) -> Vec<u64> {
    let mut h = vec![0u64; cells];
    values.for_each(|v| h[v] += 1);
    h
}

fn distributional() -> Outcome {
    let mut rng: Stream = derive_stream(SeedSpec::new(2019, 10, 0));
    let mut results: Vec<(String, f64, f64)> = Vec::new();

    for &(n, p) in &[(20u64, 0.5), (64, 0.5), (200, 0.3)] {
        let params = BinomialParams::new(n, p).unwrap();
        let obs = histogram(
            (0..SAMPLES).map(|_| sample_binomial(params, &mut rng) as usize),
            n as usize + 1,
        );
        let probs: Vec<f64> = (0..=n).map(|k| pmf(k, n, p)).collect();
        let (s, c) = chi2(&obs, &probs);
        results.push((format!("Bin({n},{p})"), s, c));
    }

    // Beta(2, 6) against its CDF on 20 equiprobable-width bins.
    let beta = statrs::distribution::Beta::new(2.0, 6.0).unwrap();
    let obs = histogram(
        (0..SAMPLES).map(|_| ((sample_beta(2.0, 6.0, &mut rng).unwrap() * 20.0) as usize).min(19)),
        20,
    );
    let probs: Vec<f64> = (0..20)
        .map(|i| beta.cdf((i + 1) as f64 / 20.0) - beta.cdf(i as f64 / 20.0))
        .collect();
    let (s, c) = chi2(&obs, &probs);
    results.push(("Beta(2,6)".into(), s, c));

    let inf = f64::INFINITY;
    let obs = histogram((0..SAMPLES).map(|_| select_arm(&[inf, inf, inf], &mut rng).unwrap()), 3);
    let (s, c) = chi2(&obs, &[1.0 / 3.0; 3]);
    results.push(("ties [inf,inf,inf]".into(), s, c));
    let obs = histogram((0..SAMPLES).map(|_| select_arm(&[0.5, 0.5], &mut rng).unwrap()), 2);
    let (s, c) = chi2(&obs, &[0.5, 0.5]);
    results.push(("ties [0.5,0.5]".into(), s, c));

    // Giro at s = 1, a = 1: 27 equally likely index triples over {0, 1, 0}.
    let augmented = [0.0, 1.0, 0.0];
    let mut probs = [0.0; 4];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                probs[(augmented[i] + augmented[j] + augmented[k]) as usize] += 1.0 / 27.0;
            }
        }
    }
    for exact in [true, false] {
        let obs = histogram(
            (0..SAMPLES).map(|_| (giro_estimate(&[0.0], 1.0, exact, &mut rng).unwrap() * 3.0).round() as usize),
            4,
        );
        let (s, c) = chi2(&obs, &probs);
        results.push((format!("giro exact_multinomial={exact}"), s, c));
    }

    let failed: Vec<_> = results
        .iter()
        .filter(|(_, s, c)| s > c)
        .map(|(l, ..)| l.clone())
        .collect();
    Outcome {
        id: 10,
        pass: failed.is_empty(),
        detail: format!(
            "{} tests at alpha=1e-3: {}{}",
            results.len(),
            results
                .iter()
                .map(|(l, s, c)| format!("{l} {s:.1}/{c:.1}"))
                .collect::<Vec<_>>()
                .join(", "),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failed.join(", "))
            }
        ),
    }
}

fn read_csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("small.toml");
    std::fs::write(
        &config,
        "name = \"small\"\narms = 5\nhorizon = 2000\nnum_problems = 6\nmaster_seed = 1\n\
         [environment]\nkind = \"beta\"\nv = 4.0\n\
         [[policies]]\npolicy = \"phe\"\na = 1.1\n[[policies]]\npolicy = \"thompson\"\n\
         [[policies]]\npolicy = \"giro\"\n[[policies]]\npolicy = \"fpl\"\n[[policies]]\npolicy = \"kl-ucb\"\n",
    )
    .unwrap();
    let mut runs = Vec::new();
    for (i, workers) in [1usize, 3, 8].into_iter().enumerate() {
        let out = tmp.path().join(format!("run{i}"));
        cmd_run(
            &config,
            &out,
            &Overrides {
                workers: Some(workers),
                seed: Some(77),
            },
        )
        .unwrap();
        runs.push(read_csvs(&out));
    }
    let verify: Vec<_> = (0..2)
        .map(|i| {
            let out = tmp.path().join(format!("verify{i}"));
            cmd_verify(None, &out).unwrap();
            read_csvs(&out)
        })
        .collect();
    let runs_equal = runs.windows(2).all(|w| w[0] == w[1]) && runs[0].len() == 6;
    let verify_equal = verify[0] == verify[1];
    Outcome {
        id: 11,
        pass: runs_equal && verify_equal,
        detail: format!(
            "run CSVs ({} files) identical for workers 1/3/8: {runs_equal}; verify CSVs identical: {verify_equal}",
            runs[0].len()
        ),
    }
}

fn mus() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    let mut record = |o: Outcome| {
        println!(
            "criterion {:>2}: {} - {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        outcomes.push(o);
    };

    let bernoulli = ExperimentConfig::load(&configs_dir().join("bernoulli.toml")).unwrap();
    let table = RegretTable::run(&bernoulli);
    record(ordering(1, &table));
    record(linear_failure(&table));
    drop(table);

    let beta = ExperimentConfig::load(&configs_dir().join("beta.toml")).unwrap();
    record(ordering(3, &RegretTable::run(&beta)));

    let bench = BenchConfig::load(&configs_dir().join("bench.toml")).unwrap();
    record(runtime(&time_policies(&bench).unwrap()));

    let pulls: Vec<u64> = (1..=50).collect();
    record(grid_outcome(
        5,
        &theorem4_grid(&[1.5, 2.0, 3.0, 6.0], &pulls, &mus()),
        4 * 50 * 11,
    ));
    record(grid_outcome(6, &lemma3_grid(&pulls, &[1.0, 2.0, 4.0], 21), 50 * 3 * 21));
    let families = [
        Lemma2Family::Constant,
        Lemma2Family::Linear,
        Lemma2Family::ReciprocalTail { a: 2.0 },
    ];
    record(grid_outcome(7, &lemma2_grid(&families, &pulls, &mus()), families.len()));
    let s: Vec<u64> = (1..=100).collect();
    let interior: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let eps = [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8];
    // One upper and one lower tail row per point.
    record(grid_outcome(
        8,
        &hoeffding_grid(&s, &interior, &eps),
        2 * 100 * 9 * eps.len(),
    ));
    record(bound_regression());
    record(distributional());
    record(determinism());

    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!(
        "acceptance: {}/{} criteria passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// The default verify grid (used by `phe verify` without a config) covers
/// the same mandatory checks with no failures; `a = 2` for the constant is
/// a domain error.
#[test]
fn default_verify_grid_passes_and_domain_error_fails() {
    let rows = run_checks(&VerifyConfig::default());
    assert!(rows.iter().all(|r| !r.is_failure()));
    let bad = constant_c_rows(&[2.0]);
    assert!(bad.iter().any(|r| r.is_failure()));
    let near_one = theorem4_grid(&[1.01], &[1, 10, 50], &[0.0, 0.5, 1.0]);
    assert!(near_one.iter().all(|r| r.pass));
    assert!(near_one.iter().all(|r| r.note.contains("log-domain")));
}
