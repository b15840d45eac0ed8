use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::ablation::AblationRow;
use super::metrics::{LocateReport, MetricsReport};
use super::sweep::SweepRow;
use super::EvalError;

fn f(x: f64) -> String {
    format!("{x:.6}")
}

/// One row per named evaluation: macro-F1 and the per-class numbers.
pub fn write_metrics_csv<W: Write>(w: W, rows: &[(String, MetricsReport)]) -> Result<(), EvalError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "name",
        "macro_f1",
        "consistent_precision",
        "consistent_recall",
        "consistent_f1",
        "inconsistent_precision",
        "inconsistent_recall",
        "inconsistent_f1",
        "count",
    ])?;
    for (name, r) in rows {
        out.write_record([
            name.clone(),
            f(r.macro_f1),
            f(r.consistent.precision),
            f(r.consistent.recall),
            f(r.consistent.f1),
            f(r.inconsistent.precision),
            f(r.inconsistent.recall),
            f(r.inconsistent.f1),
            r.count.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_locate_csv<W: Write>(w: W, rows: &[(String, LocateReport)]) -> Result<(), EvalError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["name", "em", "precision", "recall", "f1", "instances", "tp", "fp", "fn"])?;
    for (name, r) in rows {
        out.write_record([
            name.clone(),
            f(r.em),
            f(r.precision),
            f(r.recall),
            f(r.f1),
            r.instances.to_string(),
            r.true_positives.to_string(),
            r.false_positives.to_string(),
            r.false_negatives.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `components` is `all` for the whole-mixture rows.
pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<(), EvalError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["mtr", "components", "macro_f1", "consistent_predictions", "count"])?;
    for r in rows {
        out.write_record([
            f(r.mtr),
            r.components.map_or("all".to_string(), |c| c.to_string()),
            f(r.macro_f1),
            r.consistent_predictions.to_string(),
            r.count.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_ablation_csv<W: Write>(w: W, rows: &[AblationRow]) -> Result<(), EvalError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["regime", "provenance", "q1", "median", "q3", "macro_f1", "best_epoch", "threshold"])?;
    for r in rows {
        for (prov, q) in &r.quartiles {
            out.write_record([
                r.regime.to_string(),
                prov.clone(),
                f(q.q1),
                f(q.median),
                f(q.q3),
                f(r.macro_f1),
                r.best_epoch.to_string(),
                f(r.threshold),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Flat map of scalar metrics, written as pretty JSON with sorted keys.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary(pub BTreeMap<String, f64>);

impl Summary {
    pub fn insert(&mut self, key: impl Into<String>, value: f64) {
        self.0.insert(key.into(), value);
    }

    pub fn add_metrics(&mut self, prefix: &str, r: &MetricsReport) {
        self.insert(format!("{prefix}.macro_f1"), r.macro_f1);
        self.insert(format!("{prefix}.consistent_f1"), r.consistent.f1);
        self.insert(format!("{prefix}.inconsistent_f1"), r.inconsistent.f1);
    }

    pub fn add_locate(&mut self, prefix: &str, r: &LocateReport) {
        self.insert(format!("{prefix}.em"), r.em);
        self.insert(format!("{prefix}.precision"), r.precision);
        self.insert(format!("{prefix}.recall"), r.recall);
        self.insert(format!("{prefix}.f1"), r.f1);
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<(), EvalError> {
        serde_json::to_writer_pretty(&mut w, &self.0)?;
        writeln!(w)?;
        Ok(())
    }
}
