use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phe_bench::commands::{cmd_bench, cmd_run, cmd_verify, Overrides};

#[derive(Parser)]
#[command(
    name = "phe",
    version,
    about = "Bandit regret experiments, run-time benchmarks and theory checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Maximum number of worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a regret experiment.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the theory-check grids; exits nonzero on any mandatory failure.
    Verify {
        /// Grid config; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Time policies over a (K, n) grid.
    Bench {
        /// Benchmark config; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn overrides(c: &Common) -> Overrides {
    Overrides {
        workers: c.workers,
        seed: c.seed,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { config, common } => cmd_run(config, &common.out, &overrides(common)).map(|_| true),
        Command::Verify { config, common } => cmd_verify(config.as_deref(), &common.out).map(|o| o.failures == 0),
        Command::Bench { config, common } => {
            cmd_bench(config.as_deref(), &common.out, &overrides(common)).map(|_| true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
