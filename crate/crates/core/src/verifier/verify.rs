use serde::Serialize;

use crate::datagen::{Label, StatementSet};

use super::{Scorer, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDetail {
    pub pairs: usize,
    pub inconsistent_pairs: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub label: Label,
    pub score: f64,
    pub detail: Option<PairDetail>,
}

fn label_of(score: f64, threshold: f64) -> Label {
    if score < threshold {
        Label::Consistent
    } else {
        Label::Inconsistent
    }
}

fn check_size(s: &StatementSet) -> Result<(), VerifyError> {
    if s.len() < 2 {
        Err(VerifyError::TooSmall { set: s.id.clone(), size: s.len() })
    } else {
        Ok(())
    }
}

/// Scores the whole set at once: consistent iff the score is strictly below
/// the scorer's threshold.
pub fn verify_set(scorer: &dyn Scorer, s: &StatementSet) -> Result<Verdict, VerifyError> {
    check_size(s)?;
    let score = scorer.score(s)?;
    Ok(Verdict {
        label: label_of(score, scorer.threshold()),
        score,
        detail: None,
    })
}

/// Scores every unordered pair; consistent iff the fraction of pairs judged
/// inconsistent is at most `mtr`. The verdict's score is that fraction.
pub fn verify_elementwise(scorer: &dyn Scorer, s: &StatementSet, mtr: f64) -> Result<Verdict, VerifyError> {
    check_size(s)?;
    if !(0.0..=1.0).contains(&mtr) {
        return Err(VerifyError::InvalidMtr(mtr));
    }
    let ratio = pair_ratio(scorer, s)?;
    Ok(elementwise_verdict(ratio, mtr))
}

/// Fraction of pairs judged inconsistent, with counts.
pub fn pair_ratio(scorer: &dyn Scorer, s: &StatementSet) -> Result<PairDetail, VerifyError> {
    check_size(s)?;
    let n = s.len();
    let t = scorer.threshold();
    let mut bad = 0;
    for i in 0..n {
        for j in i + 1..n {
            if scorer.score(&s.subset(&[i, j]))? >= t {
                bad += 1;
            }
        }
    }
    let pairs = n * (n - 1) / 2;
    Ok(PairDetail {
        pairs,
        inconsistent_pairs: bad,
        ratio: bad as f64 / pairs as f64,
    })
}

/// The element-wise decision for an already computed pair ratio.
pub fn elementwise_verdict(detail: PairDetail, mtr: f64) -> Verdict {
    Verdict {
        label: if detail.ratio <= mtr { Label::Consistent } else { Label::Inconsistent },
        score: detail.ratio,
        detail: Some(detail),
    }
}
