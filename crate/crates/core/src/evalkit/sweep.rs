use std::collections::BTreeMap;

use serde::Serialize;

use crate::datagen::{Label, StatementSet};
use crate::verifier::{elementwise_verdict, locate, pair_ratio, verify_set, PairDetail, Scorer};

use super::metrics::{locate_gold, locate_metrics, macro_f1, LocateReport, MetricsReport};
use super::EvalError;

/// Set-level verdicts of `scorer` on `sets`, scored against their labels.
pub fn evaluate_set_level(scorer: &dyn Scorer, sets: &[StatementSet]) -> Result<MetricsReport, EvalError> {
    let pred = sets
        .iter()
        .map(|s| verify_set(scorer, s).map(|v| v.label))
        .collect::<Result<Vec<_>, _>>()?;
    let gold: Vec<Label> = sets.iter().map(|s| s.label).collect();
    macro_f1(&pred, &gold)
}

/// Pair ratios of every set, computed once for reuse across tolerance rates.
pub fn pair_ratios(scorer: &dyn Scorer, sets: &[StatementSet]) -> Result<Vec<PairDetail>, EvalError> {
    Ok(sets.iter().map(|s| pair_ratio(scorer, s)).collect::<Result<Vec<_>, _>>()?)
}

fn elementwise_report(sets: &[&StatementSet], ratios: &[PairDetail], mtr: f64) -> Result<MetricsReport, EvalError> {
    let pred: Vec<Label> = ratios.iter().map(|d| elementwise_verdict(*d, mtr).label).collect();
    let gold: Vec<Label> = sets.iter().map(|s| s.label).collect();
    macro_f1(&pred, &gold)
}

pub fn evaluate_elementwise(scorer: &dyn Scorer, sets: &[StatementSet], mtr: f64) -> Result<MetricsReport, EvalError> {
    let ratios = pair_ratios(scorer, sets)?;
    let refs: Vec<&StatementSet> = sets.iter().collect();
    elementwise_report(&refs, &ratios, mtr)
}

/// One cell of an MTR sweep. `components` is the number of base sets merged
/// into the evaluated sets, or `None` for the whole mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub mtr: f64,
    pub components: Option<usize>,
    pub macro_f1: f64,
    pub consistent_predictions: usize,
    pub count: usize,
}

/// Element-wise macro-F1 for every tolerance rate in `grid`, per component
/// count (1 to 4) and over the whole mixture.
pub fn mtr_sweep(scorer: &dyn Scorer, mixture: &[StatementSet], grid: &[f64]) -> Result<Vec<SweepRow>, EvalError> {
    let ratios = pair_ratios(scorer, mixture)?;
    let mut buckets: BTreeMap<Option<usize>, (Vec<&StatementSet>, Vec<PairDetail>)> = BTreeMap::new();
    for (s, d) in mixture.iter().zip(&ratios) {
        for key in [Some(s.provenance.parts()), None] {
            let b = buckets.entry(key).or_default();
            b.0.push(s);
            b.1.push(*d);
        }
    }
    let mut out = Vec::new();
    for &mtr in grid {
        for (key, (sets, ds)) in &buckets {
            let report = elementwise_report(sets, ds, mtr)?;
            out.push(SweepRow {
                mtr,
                components: *key,
                macro_f1: report.macro_f1,
                consistent_predictions: ds.iter().filter(|d| d.ratio <= mtr).count(),
                count: sets.len(),
            });
        }
    }
    Ok(out)
}

/// The tolerance rate from `grid` with the best whole-mixture macro-F1 on
/// `sets` (ties to the smallest rate).
pub fn best_mtr(scorer: &dyn Scorer, sets: &[StatementSet], grid: &[f64]) -> Result<(f64, f64), EvalError> {
    let mut best: Option<(f64, f64)> = None;
    for row in mtr_sweep(scorer, sets, grid)?.into_iter().filter(|r| r.components.is_none()) {
        if best.is_none_or(|b| row.macro_f1 > b.1 || (row.macro_f1 == b.1 && row.mtr < b.0)) {
            best = Some((row.mtr, row.macro_f1));
        }
    }
    best.ok_or(EvalError::EmptyGrid)
}

/// `0, 1/steps, ..., 1`.
pub fn mtr_grid(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|k| k as f64 / steps as f64).collect()
}

/// Runs locate on every set and scores the removals against the gold
/// indices (empty for consistent sets).
pub fn evaluate_locate(scorer: &dyn Scorer, sets: &[StatementSet]) -> Result<LocateReport, EvalError> {
    let mut results = Vec::with_capacity(sets.len());
    for s in sets {
        results.push((locate(scorer, s)?, locate_gold(s)));
    }
    locate_metrics(&results)
}
