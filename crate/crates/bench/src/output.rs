//! CSV, manifest and plot writers. All output is produced on one thread in
//! a fixed order, so identical inputs give identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use phe_core::sim::CurveSummary;
use phe_core::theory::TheoryCheckReport;
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::config::ExperimentConfig;
use crate::timing::TimingRow;
use crate::{Error, Result};

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))
}

/// Filesystem-safe stem for a policy label, e.g. `PHE(a=1.1)` -> `PHE_a_1.1`.
pub fn slug(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    let trimmed = out.trim_matches('_');
    if trimmed.is_empty() {
        "policy".into()
    } else {
        trimmed.into()
    }
}

/// Per-round mean regret and its standard error; rounds are 1-based.
pub fn write_regret_csv(path: &Path, summary: &CurveSummary) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["round", "mean_regret", "stderr"])?;
    for (t, (m, s)) in summary.mean.iter().zip(&summary.stderr).enumerate() {
        w.write_record([(t + 1).to_string(), m.to_string(), s.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn write_summary_csv(path: &Path, rows: &[(&str, &CurveSummary)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["policy", "final_mean_regret", "final_stderr", "num_problems"])?;
    for (label, s) in rows {
        w.write_record([
            label.to_string(),
            s.final_mean().to_string(),
            s.final_stderr().to_string(),
            s.count.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn write_checks_csv(path: &Path, rows: &[TheoryCheckReport]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "check",
        "parameters",
        "lhs",
        "rhs",
        "margin",
        "pass",
        "mandatory",
        "note",
    ])?;
    for r in rows {
        w.write_record([
            r.check.clone(),
            r.params.clone(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.margin.to_string(),
            r.pass.to_string(),
            r.mandatory.to_string(),
            r.note.clone(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn write_timing_csv(path: &Path, rows: &[TimingRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "policy",
        "K",
        "n",
        "total_seconds",
        "first_decile_per_round",
        "last_decile_per_round",
    ])?;
    for r in rows {
        w.write_record([
            r.policy.clone(),
            r.arms.to_string(),
            r.horizon.to_string(),
            r.total_seconds.to_string(),
            r.first_decile_per_round.to_string(),
            r.last_decile_per_round.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Manifest recording the config hash, master seed, produced files and the
/// effective config itself, which is enough to rerun the experiment.
pub fn manifest(config: &ExperimentConfig, files: &[PathBuf]) -> String {
    let canonical = config.to_toml();
    let mut doc = Table::new();
    doc.insert("tool".into(), concat!("phe ", env!("CARGO_PKG_VERSION")).into());
    doc.insert("config_sha256".into(), sha256_hex(&canonical).into());
    doc.insert("master_seed".into(), config.master_seed.to_string().into());
    doc.insert(
        "files".into(),
        Value::Array(
            files
                .iter()
                .map(|f| f.file_name().unwrap_or_default().to_string_lossy().into_owned().into())
                .collect(),
        ),
    );
    let embedded: Table = toml::from_str(&canonical).expect("canonical config parses");
    doc.insert("config".into(), Value::Table(embedded));
    toml::to_string(&doc).expect("manifest serializes")
}
