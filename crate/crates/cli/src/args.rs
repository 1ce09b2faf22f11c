//! Argument structures and flag-value parsers.

use clap::{Args, ValueEnum};
use std::path::PathBuf;
use ttalab_core::{BetaParams, Error, Result, UnitDensity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    Fft,
    Flip,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Input PGM image; `<stem>.pgm`, or a stem with `.r/.g/.b.pgm` planes
    /// for color.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum)]
    pub transform: TransformKind,

    /// Low-pass radius in frequency bins; required for the fft transform.
    #[arg(long)]
    pub radius: Option<f64>,

    /// Output path; defaults to `<out-dir>/<stem>_<transform>.pgm`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Probability CSV (`label,p0,...`) for the raw samples.
    #[arg(long)]
    pub raw: PathBuf,

    /// Probability CSV for the augmented samples, row-aligned with `--raw`.
    #[arg(long)]
    pub aug: PathBuf,

    /// Softmax temperature; probabilities are re-tempered through their
    /// logarithms, which matches rescaling the original logits.
    #[arg(long, default_value_t = ttalab_core::DEFAULT_TEMPERATURE)]
    pub temperature: f64,

    /// Output path; defaults to `<out-dir>/scores.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Score file: either `id,label,anomaly,remaining,msp` (full) or
    /// `id,label,score` (AUROC/ROC/histogram only).
    #[arg(long)]
    pub scores: PathBuf,

    #[arg(long, default_value_t = 50)]
    pub slices: usize,

    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

/// Flags shared by every command that runs the synthetic pipeline.
#[derive(Debug, Args)]
pub struct HarnessArgs {
    #[arg(long, default_value_t = 4)]
    pub classes: usize,

    #[arg(long, default_value_t = 32)]
    pub height: usize,

    #[arg(long, default_value_t = 32)]
    pub width: usize,

    #[arg(long, default_value_t = 200)]
    pub train_per_class: usize,

    #[arg(long, default_value_t = 200)]
    pub test_in: usize,

    #[arg(long, default_value_t = 200)]
    pub test_out: usize,

    #[arg(long, default_value_t = 0.05)]
    pub noise_sigma: f64,

    #[arg(long, default_value_t = 300)]
    pub epochs: usize,

    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub harness: HarnessArgs,

    #[arg(long, value_enum, default_value_t = TransformKind::Fft)]
    pub transform: TransformKind,

    /// Low-pass radius for the fft transform.
    #[arg(long, default_value_t = 6.0)]
    pub radius: f64,

    #[arg(long, default_value_t = ttalab_core::DEFAULT_TEMPERATURE)]
    pub temperature: f64,

    /// Temperature for the slice-analysis quantities (max probability and
    /// remaining score).
    #[arg(long, default_value_t = 1.0)]
    pub slice_temperature: f64,

    #[arg(long, default_value_t = 50)]
    pub slices: usize,

    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[command(flatten)]
    pub harness: HarnessArgs,

    /// Comma-separated fft radii swept at the fixed temperature.
    #[arg(long, default_value = "4,6,8,12,16")]
    pub radii: String,

    /// Comma-separated temperatures swept at the fixed radius.
    #[arg(long, default_value = "1,2,5,10")]
    pub temperatures: String,

    /// Radius held fixed during the temperature sweep.
    #[arg(long, default_value_t = 6.0)]
    pub fixed_radius: f64,

    /// Temperature held fixed during the radius sweep.
    #[arg(long, default_value_t = ttalab_core::DEFAULT_TEMPERATURE)]
    pub fixed_temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunsMode {
    Count,
    Mc,
    Quadrature,
    Derivative,
    Maximality,
    Fit,
}

#[derive(Debug, Args)]
pub struct RunsArgs {
    #[arg(long, value_enum)]
    pub mode: RunsMode,

    /// Binary sequence for `count`, e.g. 0011100011000.
    #[arg(long)]
    pub bits: Option<String>,

    /// Distribution of the label-1 population: `uniform`, `beta:A,B`, or
    /// `uniform:LO,HI`.
    #[arg(long)]
    pub f: Option<String>,

    /// Distribution of the label-0 population.
    #[arg(long)]
    pub g: Option<String>,

    #[arg(long)]
    pub n1: Option<usize>,

    #[arg(long)]
    pub n2: Option<usize>,

    /// Monte Carlo trial count for `mc`.
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,

    /// Absolute quadrature tolerance for `quadrature`.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,

    /// Beta parameters for `derivative` mode.
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub beta1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,

    /// Which shape parameter to differentiate: alpha1|beta1|alpha2|beta2.
    #[arg(long)]
    pub which: Option<String>,

    /// Finite-difference step for `derivative`.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,

    /// Reference Beta parameters for `maximality`, as `A,B`.
    #[arg(long)]
    pub reference: Option<String>,

    /// Candidate list for `maximality`, as `A,B;A,B;...`.
    #[arg(long)]
    pub candidates: Option<String>,

    /// Sample file for `fit`: one value per line.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

/// Parse `uniform`, `beta:A,B`, or `uniform:LO,HI`.
pub fn parse_distribution(text: &str) -> Result<UnitDensity> {
    let text = text.trim();
    if text == "uniform" {
        return Ok(UnitDensity::Uniform);
    }
    if let Some(rest) = text.strip_prefix("beta:") {
        let (a, b) = parse_pair(rest)?;
        return Ok(UnitDensity::Beta(BetaParams::new(a, b)?));
    }
    if let Some(rest) = text.strip_prefix("uniform:") {
        let (lo, hi) = parse_pair(rest)?;
        return UnitDensity::uniform_on(lo, hi);
    }
    Err(Error::InvalidInput(format!(
        "cannot parse distribution '{text}'; expected uniform, beta:A,B, or uniform:LO,HI"
    )))
}

pub fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "expected two comma-separated numbers, got '{text}'"
        )));
    }
    Ok((parse_f64(parts[0])?, parse_f64(parts[1])?))
}

pub fn parse_f64(text: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("cannot parse number '{text}'")))
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let values = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_f64)
        .collect::<Result<Vec<f64>>>()?;
    if values.is_empty() {
        return Err(Error::InvalidInput("empty parameter list".to_string()));
    }
    Ok(values)
}
