//! `ttalab` — augmentation-consistency anomaly scoring from the command line.
//!
//! Subcommands cover the full pipeline: transforming PGM images, scoring
//! aligned probability files, evaluating score files (AUROC, ROC, histogram,
//! slice analysis), parameter ablations, runs-statistic reports, and the
//! end-to-end synthetic demo. Every run writes `run-manifest.json` with the
//! resolved configuration so results can be reproduced exactly.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

mod args;
mod commands;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "ttalab",
    version,
    about = "Test-time augmentation anomaly scoring toolkit"
)]
pub struct Cli {
    /// Seed for stochastic stages (data generation, Monte Carlo).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory that receives all output files.
    #[arg(long, global = true, default_value = "./out")]
    pub out_dir: PathBuf,

    /// Format of the summary printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = args::OutputFormat::Json)]
    pub format: args::OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a test-time transform to a PGM image.
    Transform(args::TransformArgs),
    /// Score aligned raw/augmented probability CSV files.
    Score(args::ScoreArgs),
    /// Evaluate a score file: AUROC, ROC curve, histogram, slice analysis.
    Eval(args::EvalArgs),
    /// Sweep filter radii and temperatures on the synthetic fixture.
    Ablate(args::AblateArgs),
    /// Runs-statistic reports: counting, Monte Carlo, quadrature,
    /// derivatives, maximality, Beta fitting.
    Runs(args::RunsArgs),
    /// End-to-end synthetic demonstration.
    Demo(args::DemoArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
