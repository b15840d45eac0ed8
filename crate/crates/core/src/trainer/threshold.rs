use std::fmt;

use serde::{Deserialize, Serialize};

use crate::datagen::Label;

use super::TrainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdSource {
    Energy,
    InconsistentSoftmax,
    Oracle,
    External,
}

impl fmt::Display for ThresholdSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdSource::Energy => "energy",
            ThresholdSource::InconsistentSoftmax => "inconsistent-softmax",
            ThresholdSource::Oracle => "oracle",
            ThresholdSource::External => "external",
        })
    }
}

/// Decision boundary: a set is consistent iff its score is strictly below
/// `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub value: f64,
    pub learned_epoch: Option<usize>,
    pub source: ThresholdSource,
    /// Macro accuracy on the data it was learned from.
    pub macro_accuracy: f64,
    /// All scores were equal, so no threshold separates anything.
    pub degenerate: bool,
}

impl Threshold {
    pub fn fixed(value: f64, source: ThresholdSource) -> Self {
        Threshold {
            value,
            learned_epoch: None,
            source,
            macro_accuracy: f64::NAN,
            degenerate: false,
        }
    }

    pub fn classify(&self, score: f64) -> Label {
        if score < self.value {
            Label::Consistent
        } else {
            Label::Inconsistent
        }
    }
}

/// Mean of the per-class accuracies over the classes present.
pub fn macro_accuracy(scores: &[(f64, Label)], threshold: f64) -> f64 {
    let mut hit = [0usize; 2];
    let mut n = [0usize; 2];
    for &(s, l) in scores {
        let k = l as usize;
        n[k] += 1;
        if (s < threshold) == l.is_consistent() {
            hit[k] += 1;
        }
    }
    let accs: Vec<f64> = (0..2).filter(|&k| n[k] > 0).map(|k| hit[k] as f64 / n[k] as f64).collect();
    accs.iter().sum::<f64>() / accs.len() as f64
}

/// Candidate thresholds: `-inf`, midpoints between consecutive distinct
/// sorted scores, `+inf`.
pub fn candidates(scores: &[(f64, Label)]) -> Vec<f64> {
    let mut v: Vec<f64> = scores.iter().map(|s| s.0).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    let mut out = vec![f64::NEG_INFINITY];
    out.extend(v.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0));
    out.push(f64::INFINITY);
    out
}

/// Threshold maximizing macro accuracy over [`candidates`], ties going to the
/// smallest candidate. When every score is equal the `+inf` side is returned
/// and the result is flagged degenerate.
pub fn learn_threshold(scores: &[(f64, Label)], source: ThresholdSource) -> Result<Threshold, TrainError> {
    if scores.is_empty() {
        return Err(TrainError::EmptyValidation);
    }
    if scores.iter().any(|s| !s.0.is_finite()) {
        return Err(TrainError::Divergence {
            epoch: 0,
            step: 0,
            detail: "non-finite validation score".into(),
        });
    }
    let mut sorted: Vec<(f64, Label)> = scores.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n_c = sorted.iter().filter(|s| s.1.is_consistent()).count();
    let n_i = sorted.len() - n_c;
    let acc = |below_c: usize, below_i: usize| {
        let mut parts = Vec::new();
        if n_c > 0 {
            parts.push(below_c as f64 / n_c as f64);
        }
        if n_i > 0 {
            parts.push((n_i - below_i) as f64 / n_i as f64);
        }
        parts.iter().sum::<f64>() / parts.len() as f64
    };

    if sorted.first().unwrap().0 == sorted.last().unwrap().0 {
        // +inf unless only inconsistent sets are present
        let (value, macro_accuracy) = if acc(0, 0) > acc(n_c, n_i) {
            (f64::NEG_INFINITY, acc(0, 0))
        } else {
            (f64::INFINITY, acc(n_c, n_i))
        };
        return Ok(Threshold {
            value,
            learned_epoch: None,
            source,
            macro_accuracy,
            degenerate: true,
        });
    }

    // Sweep: before the first candidate nothing is below.
    let mut best = (f64::NEG_INFINITY, acc(0, 0));
    let (mut below_c, mut below_i) = (0, 0);
    let mut k = 0;
    while k < sorted.len() {
        let v = sorted[k].0;
        while k < sorted.len() && sorted[k].0 == v {
            if sorted[k].1.is_consistent() {
                below_c += 1;
            } else {
                below_i += 1;
            }
            k += 1;
        }
        let t = if k < sorted.len() {
            v + (sorted[k].0 - v) / 2.0
        } else {
            f64::INFINITY
        };
        let a = acc(below_c, below_i);
        if a > best.1 {
            best = (t, a);
        }
    }
    Ok(Threshold {
        value: best.0,
        learned_epoch: None,
        source,
        macro_accuracy: best.1,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Consistent as C, Inconsistent as I};

    #[test]
    fn separable_case_takes_the_midpoint() {
        let s = [(0.1, C), (0.2, C), (0.8, I), (0.9, I)];
        let t = learn_threshold(&s, ThresholdSource::Energy).unwrap();
        assert!((t.value - 0.5).abs() < 1e-12);
        assert_eq!(t.macro_accuracy, 1.0);
    }

    #[test]
    fn equal_scores_of_one_class() {
        let t = learn_threshold(&[(0.3, I), (0.3, I)], ThresholdSource::Energy).unwrap();
        assert!(t.degenerate);
        assert_eq!(t.value, f64::NEG_INFINITY);
        assert_eq!(t.macro_accuracy, 1.0);
        let t = learn_threshold(&[(0.3, C)], ThresholdSource::Energy).unwrap();
        assert_eq!((t.value, t.macro_accuracy), (f64::INFINITY, 1.0));
    }

    #[test]
    fn all_equal_is_degenerate() {
        let s = [(0.3, C), (0.3, I), (0.3, I)];
        let t = learn_threshold(&s, ThresholdSource::Energy).unwrap();
        assert!(t.degenerate);
        assert_eq!(t.value, f64::INFINITY);
        assert_eq!(t.macro_accuracy, 0.5);
    }

    #[test]
    fn boundary_is_inconsistent() {
        let t = Threshold::fixed(0.5, ThresholdSource::Oracle);
        assert_eq!(t.classify(0.5), I);
        assert_eq!(t.classify(0.4999), C);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(learn_threshold(&[], ThresholdSource::Energy), Err(TrainError::EmptyValidation)));
    }

    #[test]
    fn ties_go_to_the_smallest_candidate() {
        // two optimal cuts: between 0.1|0.2 and 0.3|0.4
        let s = [(0.1, C), (0.2, I), (0.3, C), (0.4, I)];
        let t = learn_threshold(&s, ThresholdSource::Energy).unwrap();
        let best = candidates(&s).into_iter().map(|c| macro_accuracy(&s, c)).fold(f64::MIN, f64::max);
        assert_eq!(t.macro_accuracy, best);
        let first = candidates(&s).into_iter().find(|&c| macro_accuracy(&s, c) == best).unwrap();
        assert_eq!(t.value, first);
    }
}
