//! Contrastive training of the energy scorer, cross-entropy training of the
//! binary baseline, threshold learning and fine-tuning.

mod contrast;
mod optim;
mod threshold;
mod train;

use serde::{Deserialize, Serialize};

use crate::datagen::DataError;
use crate::model::ModelConfig;

pub use contrast::{build_contrast_batch, contrasts_for_pair, hinge_loss, Contrast, ContrastKind, Regime};
pub use optim::{Optimizer, OptimizerKind};
pub use threshold::{candidates, learn_threshold, macro_accuracy, Threshold, ThresholdSource};
pub use train::{
    energy_scores, extend_vocabulary, fine_tune, init_params, median, medians_by_class, softmax_scores, train,
    train_binary, validation_mixture, write_log_csv, EpochLog, TrainOutcome, VALIDATION_CLASSES,
};

/// Where the fine-tuning L2 penalty pulls the weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum L2Anchor {
    Zero,
    /// The weights at the start of fine-tuning.
    Initial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainerConfig {
    pub alpha: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub regime: Regime,
    pub optimizer: OptimizerKind,
    pub rng_seed: u64,
    pub l2_weight: f64,
    pub l2_anchor: L2Anchor,
    pub model: ModelConfig,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            alpha: 0.01,
            learning_rate: 1e-3,
            epochs: 20,
            batch_size: 32,
            regime: Regime::Eight,
            optimizer: OptimizerKind::default(),
            rng_seed: 0,
            l2_weight: 1e-5,
            l2_anchor: L2Anchor::Zero,
            model: ModelConfig::default(),
        }
    }
}

impl TrainerConfig {
    pub fn check(&self) -> Result<(), TrainError> {
        if self.alpha.is_nan() || self.alpha <= 0.0 {
            return Err(TrainError::Config(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return Err(TrainError::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(TrainError::Config("batch size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TrainError {
    #[error("training diverged at epoch {epoch}, step {step}: {detail}")]
    Divergence { epoch: usize, step: usize, detail: String },
    #[error("validation set is empty")]
    EmptyValidation,
    #[error("pool exhausted: {0}")]
    PoolExhausted(String),
    #[error("invalid trainer config: {0}")]
    Config(String),
    #[error(transparent)]
    Data(DataError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<DataError> for TrainError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::PoolExhausted(m) => TrainError::PoolExhausted(m),
            other => TrainError::Data(other),
        }
    }
}
