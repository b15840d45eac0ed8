use std::collections::BTreeMap;

use serde::Serialize;

use crate::datagen::{partition, DatasetSplit, Provenance, StatementSet};
use crate::rng;
use crate::trainer::{energy_scores, init_params, train, Regime, TrainerConfig, VALIDATION_CLASSES};
use crate::verifier::EnergyScorer;

use super::mixture::build_eval_mixture;
use super::sweep::evaluate_set_level;
use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Linear-interpolation quartiles of `v` (NaN when empty).
pub fn quartiles(v: &[f64]) -> Quartiles {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let q = |p: f64| {
        if s.is_empty() {
            return f64::NAN;
        }
        let pos = p * (s.len() - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
    };
    Quartiles {
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
    }
}

/// Energy quartiles of `sets` grouped by provenance.
pub fn energy_quartiles(scorer: &EnergyScorer, sets: &[StatementSet]) -> BTreeMap<Provenance, Quartiles> {
    let scores = energy_scores(&scorer.params, sets);
    let mut by: BTreeMap<Provenance, Vec<f64>> = BTreeMap::new();
    for (s, (e, _)) in sets.iter().zip(scores) {
        by.entry(s.provenance).or_default().push(e);
    }
    by.into_iter().map(|(k, v)| (k, quartiles(&v))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationRow {
    pub regime: Regime,
    /// Keyed by provenance tag, over the validation2 mixture.
    pub quartiles: BTreeMap<String, Quartiles>,
    pub macro_f1: f64,
    pub best_epoch: usize,
    pub threshold: f64,
}

impl AblationRow {
    /// Whether the median energies increase along C, CI, I, II.
    pub fn ordered(&self) -> bool {
        let m = |k: &str| self.quartiles.get(k).map_or(f64::NAN, |q| q.median);
        m("C") < m("CI") && m("CI") < m("I") && m("I") < m("II")
    }
}

/// Trains one energy model per regime from the same seed and data, and
/// reports energy quartiles on a validation2 mixture of C, CC, I, CI and II
/// sets together with set-level macro-F1 on the 14-class test mixture.
pub fn ablation_report(
    split: &DatasetSplit,
    regimes: &[Regime],
    cfg: &TrainerConfig,
    per_class: usize,
) -> Result<Vec<AblationRow>, EvalError> {
    let (vc, vi) = partition(&split.validation2);
    let n = vc.len().min(vi.len());
    let val2 = crate::datagen::compose_mixture(
        &vc,
        &vi,
        &VALIDATION_CLASSES,
        n,
        rng::derive(cfg.rng_seed, &[rng::tag("val2")]),
        "val2",
    )?;
    let (tc, ti) = partition(&split.test);
    let test = build_eval_mixture(&tc, &ti, per_class, rng::derive(cfg.rng_seed, &[rng::tag("test")]))?;
    let mut rows = Vec::new();
    for &regime in regimes {
        let c = TrainerConfig { regime, ..cfg.clone() };
        let out = train(init_params(split, &c), split, &c)?;
        let scorer = EnergyScorer {
            params: out.params,
            threshold: out.threshold,
        };
        let report = evaluate_set_level(&scorer, &test)?;
        rows.push(AblationRow {
            regime,
            quartiles: energy_quartiles(&scorer, &val2)
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            macro_f1: report.macro_f1,
            best_epoch: out.best_epoch,
            threshold: out.threshold.value,
        });
    }
    Ok(rows)
}
