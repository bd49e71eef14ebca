//! TOML experiment, benchmark and verification configs.
//!
//! Every parse error is reported against the 1-based line of the offending
//! key or table.

use std::collections::HashSet;
use std::ops::Range;
use std::path::{Path, PathBuf};

use phe_core::env::{Family, ProblemGenSpec};
use phe_core::policy::PolicySpec;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use toml::{Spanned, Table, Value};

use crate::{Error, Result};

/// A policy entry with its display label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPolicy {
    pub label: String,
    pub spec: PolicySpec,
}

impl LabeledPolicy {
    pub fn new(spec: PolicySpec) -> Self {
        Self {
            label: spec.label(),
            spec,
        }
    }
}

/// A regret experiment: `num_problems` random instances, every policy run
/// once on each.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub environment: Family,
    pub arms: usize,
    pub horizon: u64,
    pub num_problems: u64,
    pub master_seed: u64,
    pub workers: Option<usize>,
    pub mean_interval: [f64; 2],
    pub policies: Vec<LabeledPolicy>,
}

impl ExperimentConfig {
    pub fn problem_spec(&self) -> ProblemGenSpec {
        ProblemGenSpec {
            arms: self.arms,
            mean_low: self.mean_interval[0],
            mean_high: self.mean_interval[1],
            family: self.environment,
        }
    }

    pub fn specs(&self) -> Vec<PolicySpec> {
        self.policies.iter().map(|p| p.spec.clone()).collect()
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let raw: RawExperiment = from_toml(text, path)?;
        let at = |span: Range<usize>, message: String| config_error(path, text, span, message);

        let policies_span = raw.policies.span();
        let mut policies = Vec::new();
        let mut labels = HashSet::new();
        for entry in raw.policies.into_inner() {
            let span = entry.span();
            let policy = parse_policy(entry.into_inner()).map_err(|m| at(span.clone(), m))?;
            if !labels.insert(policy.label.clone()) {
                return Err(at(span, format!("duplicate policy label `{}`", policy.label)));
            }
            policies.push(policy);
        }
        if policies.is_empty() {
            return Err(at(policies_span, "`policies` must list at least one policy".into()));
        }

        let environment = raw.environment.map(|e| (e.span(), e.into_inner()));
        let mean_interval = raw.mean_interval.map(|m| (m.span(), m.into_inner()));
        let config = ExperimentConfig {
            name: raw.name,
            environment: environment.as_ref().map_or(Family::Bernoulli, |e| e.1),
            arms: positive(path, text, raw.arms, 10, "arms")?,
            horizon: positive(path, text, raw.horizon, 10_000, "horizon")?,
            num_problems: positive(path, text, raw.num_problems, 100, "num_problems")?,
            master_seed: raw.master_seed.unwrap_or(0),
            workers: raw
                .workers
                .map(|w| positive(path, text, Some(w), 1, "workers"))
                .transpose()?,
            mean_interval: mean_interval.as_ref().map_or([0.25, 0.75], |m| m.1),
            policies,
        };
        if let Err(e) = config.problem_spec().validate() {
            let span = match e {
                phe_core::Error::InvalidParameter {
                    name: "mean_low" | "mean",
                    ..
                } => mean_interval.map(|m| m.0),
                _ => environment.map(|e| e.0),
            };
            return Err(at(span.unwrap_or(0..0), e.to_string()));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?, path)
    }

    pub fn to_toml(&self) -> String {
        let mut doc = Table::new();
        doc.insert("name".into(), self.name.clone().into());
        doc.insert("arms".into(), (self.arms as i64).into());
        doc.insert("horizon".into(), (self.horizon as i64).into());
        doc.insert("num_problems".into(), (self.num_problems as i64).into());
        doc.insert("master_seed".into(), seed_value(self.master_seed));
        if let Some(w) = self.workers {
            doc.insert("workers".into(), (w as i64).into());
        }
        doc.insert(
            "mean_interval".into(),
            Value::Array(self.mean_interval.iter().map(|&m| m.into()).collect()),
        );
        doc.insert(
            "environment".into(),
            Value::try_from(self.environment).expect("family serializes"),
        );
        let policies = self
            .policies
            .iter()
            .map(|p| {
                let mut t = Table::try_from(&p.spec).expect("policy serializes");
                t.insert("label".into(), p.label.clone().into());
                Value::Table(t)
            })
            .collect();
        doc.insert("policies".into(), Value::Array(policies));
        toml::to_string(&doc).expect("table serializes")
    }
}

/// Seeds are unsigned; values above `i64::MAX` are kept as their two's
/// complement so the TOML integer round-trips.
fn seed_value(seed: u64) -> Value {
    Value::Integer(seed as i64)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    #[serde(default = "default_name")]
    name: String,
    environment: Option<Spanned<Family>>,
    arms: Option<Spanned<i64>>,
    horizon: Option<Spanned<i64>>,
    num_problems: Option<Spanned<i64>>,
    #[serde(default, deserialize_with = "de_seed")]
    master_seed: Option<u64>,
    workers: Option<Spanned<i64>>,
    mean_interval: Option<Spanned<[f64; 2]>>,
    policies: Spanned<Vec<Spanned<Table>>>,
}

fn default_name() -> String {
    "experiment".into()
}

fn de_seed<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<u64>, D::Error> {
    Ok(Option::<i64>::deserialize(d)?.map(|s| s as u64))
}

fn positive<T: TryFrom<i64>>(path: &Path, text: &str, value: Option<Spanned<i64>>, default: T, key: &str) -> Result<T> {
    let Some(value) = value else {
        return Ok(default);
    };
    let span = value.span();
    let v = value.into_inner();
    if v < 1 {
        return Err(config_error(
            path,
            text,
            span,
            format!("`{key}` must be positive, got {v}"),
        ));
    }
    T::try_from(v).map_err(|_| config_error(path, text, span, format!("`{key}` is too large")))
}

fn parse_policy(mut table: Table) -> std::result::Result<LabeledPolicy, String> {
    let label = match table.remove("label") {
        Some(Value::String(s)) if !s.trim().is_empty() => Some(s),
        Some(_) => return Err("`label` must be a non-empty string".into()),
        None => None,
    };
    let spec: PolicySpec = Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| e.message().to_owned())?;
    spec.validate().map_err(|e| e.to_string())?;
    Ok(LabeledPolicy {
        label: label.unwrap_or_else(|| spec.label()),
        spec,
    })
}

/// Theory-check grids; every field has a default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub theorem4: Theorem4Grid,
    pub lemma3: Lemma3Grid,
    pub lemma2: Lemma2Grid,
    pub hoeffding: HoeffdingGrid,
    pub constant_c: ConstantCGrid,
    pub tail_optimism: TailOptimismGrid,
}

fn tenths() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

fn interior_tenths() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Theorem4Grid {
    pub a: Vec<f64>,
    pub max_pulls: u64,
    pub mu: Vec<f64>,
}

impl Default for Theorem4Grid {
    fn default() -> Self {
        Self {
            a: vec![1.5, 2.0, 3.0, 6.0],
            max_pulls: 50,
            mu: tenths(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lemma3Grid {
    pub a: Vec<f64>,
    pub max_pulls: u64,
    pub deltas: usize,
}

impl Default for Lemma3Grid {
    fn default() -> Self {
        Self {
            a: vec![1.0, 2.0, 4.0],
            max_pulls: 50,
            deltas: 21,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lemma2Grid {
    pub max_pulls: u64,
    pub mu: Vec<f64>,
    /// Scales `a` of the reciprocal-tail family.
    pub reciprocal_tail_a: Vec<f64>,
}

impl Default for Lemma2Grid {
    fn default() -> Self {
        Self {
            max_pulls: 50,
            mu: tenths(),
            reciprocal_tail_a: vec![1.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HoeffdingGrid {
    pub max_pulls: u64,
    pub mu: Vec<f64>,
    pub epsilon: Vec<f64>,
}

impl Default for HoeffdingGrid {
    fn default() -> Self {
        Self {
            max_pulls: 100,
            mu: interior_tenths(),
            epsilon: vec![0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantCGrid {
    pub a: Vec<f64>,
}

impl Default for ConstantCGrid {
    fn default() -> Self {
        Self { a: vec![2.1, 3.0, 6.0] }
    }
}

/// Informational only: never fails the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TailOptimismGrid {
    pub a: Vec<f64>,
    pub min_pulls: u64,
    pub max_pulls: u64,
    pub mu: Vec<f64>,
}

impl Default for TailOptimismGrid {
    fn default() -> Self {
        Self {
            a: vec![1.1, 2.1],
            min_pulls: 5,
            max_pulls: 100,
            mu: interior_tenths(),
        }
    }
}

impl VerifyConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        from_toml(text, path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("verify config serializes")
    }
}

/// Run-time benchmark grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub environment: Family,
    pub mean_interval: [f64; 2],
    pub arms: Vec<usize>,
    pub horizons: Vec<u64>,
    pub repeats: u32,
    pub master_seed: u64,
    pub policies: Vec<LabeledPolicy>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            environment: Family::Beta { v: 4.0 },
            mean_interval: [0.25, 0.75],
            arms: vec![5, 10, 20],
            horizons: vec![1_000, 10_000],
            repeats: 3,
            master_seed: 0,
            policies: vec![
                LabeledPolicy::new(PolicySpec::Thompson),
                LabeledPolicy::new(PolicySpec::Phe { a: 1.1 }),
                LabeledPolicy::new(PolicySpec::giro(1.0)),
            ],
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBench {
    environment: Option<Family>,
    mean_interval: Option<[f64; 2]>,
    arms: Option<Vec<usize>>,
    horizons: Option<Vec<u64>>,
    repeats: Option<Spanned<u32>>,
    #[serde(default, deserialize_with = "de_seed")]
    master_seed: Option<u64>,
    policies: Option<Vec<Spanned<Table>>>,
}

impl BenchConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let raw: RawBench = from_toml(text, path)?;
        let defaults = Self::default();
        let policies = match raw.policies {
            None => defaults.policies,
            Some(entries) => {
                let mut out = Vec::new();
                for entry in entries {
                    let span = entry.span();
                    out.push(parse_policy(entry.into_inner()).map_err(|m| config_error(path, text, span, m))?);
                }
                out
            }
        };
        let repeats = match raw.repeats {
            Some(r) if r.get_ref() < &3 => {
                return Err(config_error(
                    path,
                    text,
                    r.span(),
                    "`repeats` must be at least 3".into(),
                ))
            }
            Some(r) => r.into_inner(),
            None => defaults.repeats,
        };
        Ok(Self {
            environment: raw.environment.unwrap_or(defaults.environment),
            mean_interval: raw.mean_interval.unwrap_or(defaults.mean_interval),
            arms: raw.arms.unwrap_or(defaults.arms),
            horizons: raw.horizons.unwrap_or(defaults.horizons),
            repeats,
            master_seed: raw.master_seed.unwrap_or(defaults.master_seed),
            policies,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?, path)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn from_toml<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        config_error(path, text, span, e.message().trim().to_owned())
    })
}

fn config_error(path: &Path, text: &str, span: Range<usize>, message: String) -> Error {
    let offset = span.start.min(text.len());
    let line = text[..offset].matches('\n').count() + 1;
    Error::Config {
        path: PathBuf::from(path),
        line,
        message,
    }
}
