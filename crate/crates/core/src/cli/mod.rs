//! The `setcoh` command line: generate data, train, verify, locate, sweep
//! tolerance rates and run regime ablations.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use commands::{load_scorer, read_threshold, run, write_threshold};
pub use config::{Arch, RunConfig, Strategy};

use crate::datagen::{DataError, Style};
use crate::evalkit::EvalError;
use crate::model::ModelError;
use crate::trainer::{Regime, TrainError};
use crate::verifier::VerifyError;

#[derive(Debug, Parser)]
#[command(name = "setcoh", version, about = "Set-level consistency verification with energy models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate train/validation/test splits.
    Gen(GenArgs),
    /// Train an energy model or the binary baseline.
    Train(TrainArgs),
    /// Verify an evaluation mixture and report macro-F1.
    Verify(EvalArgs),
    /// Locate inconsistent statements in single-inconsistency mixtures.
    Locate(EvalArgs),
    /// Element-wise macro-F1 over a grid of tolerance rates.
    Sweep(EvalArgs),
    /// Train one model per contrast regime and compare them.
    Ablate(AblateArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON config (e.g. a previous config.snapshot); flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed; defaults to $SETCOH_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_parser = parse_style)]
    pub style: Option<Style>,
    /// Per-label counts: TRAIN, TRAIN,EVAL or all eight split/label counts.
    #[arg(long, value_delimiter = ',')]
    pub counts: Option<Vec<usize>>,
    #[arg(long)]
    pub max_distractors: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct TrainFlags {
    #[arg(long, value_parser = parse_regime)]
    pub regime: Option<Regime>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub pair_buckets: Option<usize>,
    #[arg(long)]
    pub init_scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Dataset directory written by `gen`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub arch: Option<Arch>,
    #[command(flatten)]
    pub train: TrainFlags,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Split the mixture is drawn from.
    #[arg(long)]
    pub split: Option<String>,
    #[arg(long, value_enum)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub mtr: Option<f64>,
    /// `oracle`, `graded-oracle`, a model directory, a model.bin file or a
    /// score file (`threshold=<real>` header, `set_id,score` rows).
    #[arg(long)]
    pub scorer: Option<String>,
    #[arg(long)]
    pub mixture_per_class: Option<usize>,
    /// Tolerance grid resolution for `sweep` (rates 0, 1/n, ..., 1).
    #[arg(long)]
    pub grid_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub mixture_per_class: Option<usize>,
    /// Regimes to train, e.g. basic,six,eight.
    #[arg(long, value_delimiter = ',', value_parser = parse_regime)]
    pub regimes: Option<Vec<Regime>>,
    #[command(flatten)]
    pub train: TrainFlags,
}

fn parse_style(s: &str) -> Result<Style, String> {
    s.parse().map_err(|e: DataError| e.to_string())
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse()
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 bad flags or config, 3 data and file errors, 4 training divergence.
    pub fn exit_code(&self) -> u8 {
        let divergence = |e: &TrainError| matches!(e, TrainError::Divergence { .. });
        match self {
            CliError::Usage(_) => 2,
            CliError::Train(TrainError::Config(_)) => 2,
            CliError::Train(e) if divergence(e) => 4,
            CliError::Eval(EvalError::Train(e)) if divergence(e) => 4,
            CliError::Eval(EvalError::Train(TrainError::Config(_))) => 2,
            CliError::Verify(VerifyError::InvalidMtr(_)) => 2,
            _ => 3,
        }
    }
}

/// Parses `args` and runs the command; the process exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::resolve(&cli.command).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
