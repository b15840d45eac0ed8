use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::datagen::{build_splits, partition, Label, Provenance, SplitConfig, Style};
use crate::verifier::{verify_elementwise, LocateResult, OracleScorer, Terminal};

use Label::{Consistent as C, Inconsistent as I};

fn small_mixture(per_class: usize) -> Vec<crate::datagen::StatementSet> {
    let split = build_splits(&SplitConfig::uniform(Style::Snli, 16), 1).unwrap();
    let (c, i) = partition(&split.test);
    build_eval_mixture(&c, &i, per_class, 9).unwrap()
}

#[test]
fn degenerate_predictors() {
    for per_class in [1, 3] {
        let mix = small_mixture(per_class);
        let gold: Vec<Label> = mix.iter().map(|s| s.label).collect();
        let all_c = macro_f1(&vec![C; gold.len()], &gold).unwrap();
        let all_i = macro_f1(&vec![I; gold.len()], &gold).unwrap();
        assert!((all_c.macro_f1 - 4.0 / 18.0).abs() < 1e-12);
        assert!((all_c.consistent.f1 - 8.0 / 18.0).abs() < 1e-12);
        assert!((all_i.macro_f1 - 10.0 / 24.0).abs() < 1e-12);
        assert!((all_i.inconsistent.f1 - 20.0 / 24.0).abs() < 1e-12);
    }
}

#[test]
fn mixture_classes() {
    let mix = small_mixture(1);
    assert_eq!(mix.len(), 14);
    // every multiset over {C, I} of size 1 to 4
    let mut expected = BTreeSet::new();
    for n in 1..=4usize {
        for bits in 0u32..1 << n {
            let i = bits.count_ones() as usize;
            expected.insert(Provenance::new(n - i, i));
        }
    }
    let got: BTreeSet<Provenance> = mix.iter().map(|s| s.provenance).collect();
    assert_eq!(got, expected);
    assert!(mix.iter().all(|s| s.label == s.provenance.label()));
    let mix = small_mixture(2);
    let consistent = mix.iter().filter(|s| s.label == C).count();
    assert_eq!((mix.len(), consistent), (28, 8));
}

#[test]
fn perfect_and_mismatched() {
    let gold = [C, I, I, C];
    assert_eq!(macro_f1(&gold, &gold).unwrap().macro_f1, 1.0);
    assert!(matches!(
        macro_f1(&[C], &gold),
        Err(EvalError::LengthMismatch { predictions: 1, golds: 4 })
    ));
}

fn result(removed: Vec<usize>) -> LocateResult {
    LocateResult {
        removed_indices: removed,
        terminal: Terminal::ConsistentReached,
        trace: vec![],
    }
}

#[test]
fn locate_counting() {
    let r = locate_metrics(&[(result(vec![2]), Some(vec![2]))]).unwrap();
    assert_eq!((r.em, r.precision, r.recall), (1.0, 1.0, 1.0));
    let r = locate_metrics(&[(result(vec![1]), Some(vec![1, 5]))]).unwrap();
    assert_eq!((r.em, r.precision, r.recall), (0.0, 1.0, 0.5));
    let r = locate_metrics(&[(result(vec![]), Some(vec![]))]).unwrap();
    assert_eq!(r.em, 1.0);
    assert!(matches!(locate_metrics(&[(result(vec![]), None)]), Err(EvalError::MissingGold(0))));
}

#[test]
fn locate_counting_exhaustive() {
    // all gold/prediction subsets of {0,1,2,3} with at most 3 elements
    let subsets: Vec<Vec<usize>> = (0u32..16)
        .filter(|m| m.count_ones() <= 3)
        .map(|m| (0..4).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    for g in &subsets {
        for p in &subsets {
            let r = locate_metrics(&[(result(p.clone()), Some(g.clone()))]).unwrap();
            let tp = p.iter().filter(|x| g.contains(x)).count() as f64;
            let prec = if p.is_empty() { 0.0 } else { tp / p.len() as f64 };
            let rec = if g.is_empty() { 0.0 } else { tp / g.len() as f64 };
            let f1 = if prec + rec == 0.0 { 0.0 } else { 2.0 * prec * rec / (prec + rec) };
            assert!((r.precision - prec).abs() < 1e-12);
            assert!((r.recall - rec).abs() < 1e-12);
            assert!((r.f1 - f1).abs() < 1e-12, "{g:?} {p:?}");
            assert_eq!(r.em == 1.0, g == p);
        }
    }
}

#[test]
fn sweep_matches_pointwise_verdicts() {
    let mix = small_mixture(2);
    let rows = mtr_sweep(&OracleScorer, &mix, &[0.0]).unwrap();
    let all = rows.iter().find(|r| r.components.is_none()).unwrap();
    let direct = mix
        .iter()
        .filter(|s| verify_elementwise(&OracleScorer, s, 0.0).unwrap().label == C)
        .count();
    assert_eq!(all.consistent_predictions, direct);
    assert_eq!(rows.len(), 5);

    let grid = mtr_grid(10);
    let rows = mtr_sweep(&OracleScorer, &mix, &grid).unwrap();
    let counts: Vec<usize> = rows
        .iter()
        .filter(|r| r.components.is_none())
        .map(|r| r.consistent_predictions)
        .collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    let (mtr, _) = best_mtr(&OracleScorer, &mix, &grid).unwrap();
    assert!(grid.contains(&mtr));
    assert!(matches!(best_mtr(&OracleScorer, &mix, &[]), Err(EvalError::EmptyGrid)));
}

#[test]
fn oracle_set_level_is_perfect() {
    let mix = small_mixture(2);
    assert_eq!(evaluate_set_level(&OracleScorer, &mix).unwrap().macro_f1, 1.0);
}

#[test]
fn quartile_values() {
    let q = quartiles(&[4.0, 1.0, 3.0, 2.0, 5.0]);
    assert_eq!((q.q1, q.median, q.q3), (2.0, 3.0, 4.0));
    assert!(quartiles(&[]).median.is_nan());
}

#[test]
fn report_headers() {
    let mut buf = Vec::new();
    let r = macro_f1(&[C, I], &[C, I]).unwrap();
    write_metrics_csv(&mut buf, &[("set".into(), r)]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("name,macro_f1,"));
    assert!(text.contains("set,1.000000,"));
    let mut s = Summary::default();
    s.add_metrics("test", &r);
    let mut buf = Vec::new();
    s.write(&mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v["test.macro_f1"], 1.0);
}

fn brute(pred: &[Label], gold: &[Label]) -> f64 {
    let mut f = 0.0;
    for c in [C, I] {
        let mut m = [[0usize; 2]; 2];
        for (p, g) in pred.iter().zip(gold) {
            m[(*p == c) as usize][(*g == c) as usize] += 1;
        }
        let (tp, fp, fn_) = (m[1][1], m[1][0], m[0][1]);
        f += if 2 * tp + fp + fn_ == 0 { 0.0 } else { 2.0 * tp as f64 / (2 * tp + fp + fn_) as f64 };
    }
    f / 2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn macro_f1_matches_confusion_oracle(pairs in proptest::collection::vec((any::<bool>(), any::<bool>()), 0..40)) {
        let lab = |b: bool| if b { I } else { C };
        let pred: Vec<Label> = pairs.iter().map(|p| lab(p.0)).collect();
        let gold: Vec<Label> = pairs.iter().map(|p| lab(p.1)).collect();
        let r = macro_f1(&pred, &gold).unwrap();
        prop_assert!((r.macro_f1 - brute(&pred, &gold)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&r.macro_f1));
    }
}
