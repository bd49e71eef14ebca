//! Experiment harness around `phe-core`: TOML configs, parallel regret
//! experiments, run-time benchmarks, theory-check grids, and CSV/SVG output.

pub mod commands;
pub mod config;
mod error;
pub mod experiment;
pub mod output;
pub mod plot;
pub mod timing;
pub mod verify;

pub use error::{Error, Result};
