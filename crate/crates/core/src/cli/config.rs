use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::datagen::{SplitConfig, Style};
use crate::trainer::{Regime, TrainerConfig};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Arch {
    Energy,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Set,
    Elementwise,
}

/// Fully resolved settings of one command; written to `config.snapshot`
/// and accepted back through `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: String,
    /// Dataset directory (one sub-directory per split) or, for `gen`, unused.
    pub data: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub style: Style,
    pub counts: Vec<usize>,
    pub max_distractors: usize,
    pub arch: Arch,
    pub trainer: TrainerConfig,
    pub strategy: Strategy,
    pub mtr: f64,
    /// `oracle`, `graded-oracle`, a model directory, a `model.bin` path or a
    /// score file.
    pub scorer: String,
    pub mixture_per_class: usize,
    pub split: String,
    pub grid_steps: usize,
    pub regimes: Vec<Regime>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: String::new(),
            data: None,
            out: PathBuf::from("out"),
            seed: 0,
            style: Style::Qa,
            counts: vec![2000, 200],
            max_distractors: 4,
            arch: Arch::Energy,
            trainer: TrainerConfig::default(),
            strategy: Strategy::Set,
            mtr: 0.0,
            scorer: "oracle".into(),
            mixture_per_class: 200,
            split: "test".into(),
            grid_steps: 20,
            regimes: Regime::ALL.to_vec(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config `{}`: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config `{}`: {e}", path.display())))
    }

    pub fn snapshot(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// Split sizes from `counts`: one number sets the training split only,
    /// two set training and every evaluation split, eight give every
    /// (consistent, inconsistent) pair explicitly.
    pub fn split_config(&self) -> Result<SplitConfig, CliError> {
        let mut sc = SplitConfig::new(self.style);
        sc.max_distractors = self.max_distractors;
        match self.counts[..] {
            [n] => sc.train = (n, n),
            [n, e] => {
                sc.train = (n, n);
                sc.validation1 = (e, e);
                sc.validation2 = (e, e);
                sc.test = (e, e);
            }
            [a, b, c, d, e, f, g, h] => {
                sc.train = (a, b);
                sc.validation1 = (c, d);
                sc.validation2 = (e, f);
                sc.test = (g, h);
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "--counts takes 1, 2 or 8 numbers, got {}",
                    self.counts.len()
                )))
            }
        }
        Ok(sc)
    }

    pub fn data_dir(&self) -> Result<&Path, CliError> {
        self.data
            .as_deref()
            .ok_or_else(|| CliError::Usage("--data is required for this command".into()))
    }
}
