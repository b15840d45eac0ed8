//! Consistency decisions from any scorer: whole-set and pairwise
//! verification, and greedy localization of the offending statements.

mod locate;
mod scorer;
mod verify;

pub use locate::{locate, LocateResult, LocateStep, Terminal};
pub use scorer::{EnergyScorer, ExternalScorer, GradedOracleScorer, OracleScorer, Scorer, SoftmaxScorer};
pub use verify::{elementwise_verdict, pair_ratio, verify_elementwise, verify_set, PairDetail, Verdict};

use crate::datagen::DataError;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("set `{set}` has {size} statement(s); at least 2 are needed")]
    TooSmall { set: String, size: usize },
    #[error("no score for set id `{0}`")]
    UnknownId(String),
    #[error("maximum tolerance rate must lie in [0, 1], got {0}")]
    InvalidMtr(f64),
    #[error("score file: {0}")]
    ScoreFile(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests;
