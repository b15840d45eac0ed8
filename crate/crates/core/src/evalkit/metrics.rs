use serde::Serialize;

use crate::datagen::{Label, StatementSet};
use crate::verifier::LocateResult;

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold instances of the class.
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub consistent: ClassMetrics,
    pub inconsistent: ClassMetrics,
    pub macro_f1: f64,
    pub count: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn prf(tp: usize, fp: usize, fn_: usize) -> (f64, f64, f64) {
    let p = ratio(tp, tp + fp);
    let r = ratio(tp, tp + fn_);
    let f = ratio(2 * tp, 2 * tp + fp + fn_);
    (p, r, f)
}

/// Per-class precision, recall and F1 (0 whenever a denominator is 0) and
/// their unweighted macro mean.
pub fn macro_f1(predictions: &[Label], golds: &[Label]) -> Result<MetricsReport, EvalError> {
    if predictions.len() != golds.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            golds: golds.len(),
        });
    }
    let class = |c: Label| {
        let mut tp = 0;
        let mut fp = 0;
        let mut fn_ = 0;
        for (&p, &g) in predictions.iter().zip(golds) {
            match (p == c, g == c) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                _ => {}
            }
        }
        let (precision, recall, f1) = prf(tp, fp, fn_);
        ClassMetrics {
            precision,
            recall,
            f1,
            support: tp + fn_,
        }
    };
    let consistent = class(Label::Consistent);
    let inconsistent = class(Label::Inconsistent);
    Ok(MetricsReport {
        consistent,
        inconsistent,
        macro_f1: (consistent.f1 + inconsistent.f1) / 2.0,
        count: golds.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocateReport {
    pub em: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub instances: usize,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

/// Gold indices of a set for locate scoring: empty for consistent sets,
/// the recorded indices for inconsistent ones.
pub fn locate_gold(s: &StatementSet) -> Option<Vec<usize>> {
    if s.label.is_consistent() {
        Some(Vec::new())
    } else {
        s.gold_inconsistent_indices.clone()
    }
}

/// Micro precision/recall/F1 over removed versus gold indices and the
/// fraction of instances whose removed set equals the gold set exactly.
pub fn locate_metrics(results: &[(LocateResult, Option<Vec<usize>>)]) -> Result<LocateReport, EvalError> {
    let (mut tp, mut fp, mut fn_, mut hits) = (0, 0, 0, 0);
    for (k, (r, gold)) in results.iter().enumerate() {
        let gold = gold.as_ref().ok_or(EvalError::MissingGold(k))?;
        let mut pred = r.removed_indices.clone();
        pred.sort_unstable();
        pred.dedup();
        let mut g = gold.clone();
        g.sort_unstable();
        g.dedup();
        let inter = pred.iter().filter(|i| g.contains(i)).count();
        tp += inter;
        fp += pred.len() - inter;
        fn_ += g.len() - inter;
        if pred == g {
            hits += 1;
        }
    }
    let (precision, recall, f1) = prf(tp, fp, fn_);
    Ok(LocateReport {
        em: ratio(hits, results.len()),
        precision,
        recall,
        f1,
        instances: results.len(),
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
    })
}
