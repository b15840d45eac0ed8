use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::datagen::{oracle_consistent, StatementSet};
use crate::logic::is_satisfiable_with;
use crate::model::{inconsistent_probability, ModelParams};
use crate::trainer::{Threshold, ThresholdSource};

use super::VerifyError;

/// Anything that maps a statement set to a real score together with the
/// threshold that separates consistent (below) from inconsistent.
pub trait Scorer {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError>;
    fn threshold(&self) -> f64;
}

impl<T: Scorer + ?Sized> Scorer for &T {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        (**self).score(s)
    }
    fn threshold(&self) -> f64 {
        (**self).threshold()
    }
}

impl<T: Scorer + ?Sized> Scorer for Box<T> {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        (**self).score(s)
    }
    fn threshold(&self) -> f64 {
        (**self).threshold()
    }
}

/// Energy of a trained model.
#[derive(Debug, Clone)]
pub struct EnergyScorer {
    pub params: ModelParams,
    pub threshold: Threshold,
}

impl Scorer for EnergyScorer {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        Ok(self.params.energy_of(s))
    }
    fn threshold(&self) -> f64 {
        self.threshold.value
    }
}

/// Softmax probability of the inconsistent class of the binary head.
#[derive(Debug, Clone)]
pub struct SoftmaxScorer {
    pub params: ModelParams,
    pub threshold: Threshold,
}

impl Scorer for SoftmaxScorer {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        Ok(inconsistent_probability(self.params.logits_of(s)))
    }
    fn threshold(&self) -> f64 {
        self.threshold.value
    }
}

/// 1.0 if the statements (with the set's axioms) are unsatisfiable, else 0.0.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleScorer;

impl OracleScorer {
    pub const THRESHOLD: f64 = 0.5;
}

impl Scorer for OracleScorer {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        Ok(if oracle_consistent(s)? { 0.0 } else { 1.0 })
    }
    fn threshold(&self) -> f64 {
        Self::THRESHOLD
    }
}

/// Fraction of unsatisfiable 2-subsets. Collective inconsistencies that no
/// pair exhibits score 0, so this is a pairwise view of the oracle; any
/// positive score counts as inconsistent.
#[derive(Debug, Clone, Copy, Default)]
pub struct GradedOracleScorer;

impl Scorer for GradedOracleScorer {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        let fs = s.formulas().map_err(VerifyError::from)?;
        let ax: Vec<_> = s.axioms.iter().collect();
        let n = fs.len();
        if n < 2 {
            return Ok(0.0);
        }
        let mut bad = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if !is_satisfiable_with(&[fs[i], fs[j]], &ax).map_err(crate::datagen::DataError::from)? {
                    bad += 1;
                }
            }
        }
        Ok(bad as f64 / (n * (n - 1) / 2) as f64)
    }
    fn threshold(&self) -> f64 {
        f64::MIN_POSITIVE
    }
}

/// Scores looked up by set id from a CSV file whose first line is
/// `threshold=<real>` followed by `set_id,score` rows.
#[derive(Debug, Clone)]
pub struct ExternalScorer {
    scores: HashMap<String, f64>,
    threshold: f64,
}

impl ExternalScorer {
    pub fn new(scores: HashMap<String, f64>, threshold: f64) -> Self {
        ExternalScorer { scores, threshold }
    }

    pub fn from_reader<R: BufRead>(mut r: R) -> Result<Self, VerifyError> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let threshold = header
            .trim()
            .strip_prefix("threshold=")
            .and_then(|v| v.trim().parse::<f64>().ok())
            .ok_or_else(|| VerifyError::ScoreFile(format!("expected `threshold=<real>` header, got `{}`", header.trim())))?;
        let mut rows = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
        let mut scores = HashMap::new();
        for (k, rec) in rows.records().enumerate() {
            let rec = rec.map_err(|e| VerifyError::ScoreFile(e.to_string()))?;
            let line = k + 2;
            if rec.len() != 2 {
                return Err(VerifyError::ScoreFile(format!("line {line}: expected `set_id,score`")));
            }
            let score: f64 = rec[1]
                .trim()
                .parse()
                .map_err(|_| VerifyError::ScoreFile(format!("line {line}: bad score `{}`", &rec[1])))?;
            scores.insert(rec[0].trim().to_string(), score);
        }
        Ok(ExternalScorer { scores, threshold })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, VerifyError> {
        let f = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(f))
    }

    /// Writes `scorer`'s scores of `sets` in the file format read by
    /// [`ExternalScorer::from_file`].
    pub fn write<W: std::io::Write>(
        mut w: W,
        scorer: &dyn Scorer,
        sets: &[StatementSet],
    ) -> Result<(), VerifyError> {
        writeln!(w, "threshold={:?}", scorer.threshold())?;
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for s in sets {
            out.write_record([s.id.clone(), format!("{:?}", scorer.score(s)?)])
                .map_err(|e| VerifyError::ScoreFile(e.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn threshold_info(&self) -> Threshold {
        Threshold::fixed(self.threshold, ThresholdSource::External)
    }
}

impl Scorer for ExternalScorer {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        self.scores
            .get(&s.id)
            .copied()
            .ok_or_else(|| VerifyError::UnknownId(s.id.clone()))
    }
    fn threshold(&self) -> f64 {
        self.threshold
    }
}
