//! Evaluation mixtures, verification and localization metrics, tolerance
//! sweeps, regime ablations and their report files.

mod ablation;
mod metrics;
mod mixture;
mod report;
mod sweep;

pub use ablation::{ablation_report, energy_quartiles, quartiles, AblationRow, Quartiles};
pub use metrics::{locate_gold, locate_metrics, macro_f1, ClassMetrics, LocateReport, MetricsReport};
pub use mixture::{build_eval_mixture, build_locate_mixture, eval_classes, locate_classes};
pub use report::{write_ablation_csv, write_locate_csv, write_metrics_csv, write_sweep_csv, Summary};
pub use sweep::{
    best_mtr, evaluate_elementwise, evaluate_locate, evaluate_set_level, mtr_grid, mtr_sweep, pair_ratios, SweepRow,
};

use crate::datagen::DataError;
use crate::trainer::TrainError;
use crate::verifier::VerifyError;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("{predictions} predictions but {golds} gold labels")]
    LengthMismatch { predictions: usize, golds: usize },
    #[error("instance {0} has no gold indices")]
    MissingGold(usize),
    #[error("empty tolerance grid")]
    EmptyGrid,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests;
