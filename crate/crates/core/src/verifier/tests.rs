use std::cell::Cell;
use std::collections::HashMap;

use proptest::prelude::*;

use super::*;
use crate::datagen::{
    apply_rule, corrupt_qa, gen_qa_set, gen_qa_world, gen_seed_pair, oracle_consistent, Difficulty, Label,
    Provenance, Statement, StatementSet, RULES,
};
use crate::logic::Formula;

fn a(id: &str) -> Formula {
    Formula::atom(id)
}

fn set_of(id: &str, fs: Vec<Formula>) -> StatementSet {
    StatementSet {
        id: id.into(),
        statements: fs.into_iter().map(|f| Statement::sentence("s", Some(f))).collect(),
        label: Label::Inconsistent,
        provenance: Provenance::I,
        rule_id: None,
        difficulty: Difficulty::Medium,
        gold_inconsistent_indices: None,
        axioms: vec![],
    }
}

/// Scores by a closure over the set and counts calls.
struct FnScorer<F: Fn(&StatementSet) -> f64> {
    f: F,
    t: f64,
    calls: Cell<usize>,
}

impl<F: Fn(&StatementSet) -> f64> Scorer for FnScorer<F> {
    fn score(&self, s: &StatementSet) -> Result<f64, VerifyError> {
        self.calls.set(self.calls.get() + 1);
        Ok((self.f)(s))
    }
    fn threshold(&self) -> f64 {
        self.t
    }
}

fn fn_scorer<F: Fn(&StatementSet) -> f64>(f: F, t: f64) -> FnScorer<F> {
    FnScorer { f, t, calls: Cell::new(0) }
}

fn or_train() -> StatementSet {
    set_of("train", vec![Formula::or(a("p"), a("q")), Formula::not(a("p")), Formula::not(a("q"))])
}

#[test]
fn oracle_flags_the_disjunction_example() {
    let v = verify_set(&OracleScorer, &or_train()).unwrap();
    assert_eq!(v.label, Label::Inconsistent);
    assert_eq!(v.score, 1.0);
}

#[test]
fn oracle_accepts_consistent_rule_sets() {
    for (k, rule) in RULES.iter().filter(|r| r.label == Label::Consistent).enumerate() {
        let seeds: Vec<_> = (0..rule.family.seed_count())
            .map(|j| gen_seed_pair((k * 7 + j) as u64, rule.family.relation()))
            .collect();
        let s = apply_rule(&rule.id(), &seeds, &format!("r{k}")).unwrap();
        if s.len() >= 2 {
            assert_eq!(verify_set(&OracleScorer, &s).unwrap().label, Label::Consistent, "{}", rule.id());
        }
    }
}

#[test]
fn threshold_boundary_is_inconsistent() {
    let s = or_train();
    let ext = ExternalScorer::new(HashMap::from([("train".to_string(), 0.5)]), 0.5);
    assert_eq!(verify_set(&ext, &s).unwrap().label, Label::Inconsistent);
}

#[test]
fn too_small_sets_are_rejected() {
    let s = set_of("one", vec![a("p")]);
    assert!(matches!(verify_set(&OracleScorer, &s), Err(VerifyError::TooSmall { .. })));
    assert!(matches!(locate(&OracleScorer, &s), Err(VerifyError::TooSmall { .. })));
}

#[test]
fn elementwise_counts_pairs() {
    let s = set_of("four", vec![a("p"), a("q"), a("r"), a("s")]);
    // exactly the pair {0, 1} is inconsistent
    let sc = fn_scorer(|x: &StatementSet| if x.id == "four[0,1]" { 1.0 } else { 0.0 }, 0.5);
    let v = verify_elementwise(&sc, &s, 0.2).unwrap();
    let d = v.detail.unwrap();
    assert_eq!((d.pairs, d.inconsistent_pairs), (6, 1));
    assert!((d.ratio - 1.0 / 6.0).abs() < 1e-12);
    assert_eq!(v.label, Label::Consistent);
    assert_eq!(verify_elementwise(&sc, &s, 0.0).unwrap().label, Label::Inconsistent);
    assert!(matches!(verify_elementwise(&sc, &s, 1.5), Err(VerifyError::InvalidMtr(_))));
}

#[test]
fn collective_inconsistency_is_invisible_pairwise() {
    let s = set_of("se28", vec![Formula::or(a("p"), a("h")), Formula::not(a("p")), Formula::not(a("h"))]);
    assert_eq!(verify_elementwise(&OracleScorer, &s, 0.0).unwrap().label, Label::Consistent);
    assert_eq!(verify_set(&OracleScorer, &s).unwrap().label, Label::Inconsistent);
    assert_eq!(GradedOracleScorer.score(&s).unwrap(), 0.0);
    let direct = set_of("d", vec![a("p"), Formula::not(a("p")), a("q")]);
    assert!((GradedOracleScorer.score(&direct).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn locate_consistent_input() {
    let s = set_of("ok", vec![a("p"), a("q"), a("r")]);
    let r = locate(&OracleScorer, &s).unwrap();
    assert!(r.removed_indices.is_empty());
    assert_eq!(r.terminal, Terminal::ConsistentReached);
    assert_eq!(r.trace.len(), 1);
}

#[test]
fn locate_size_two_stop() {
    let s = set_of("two", vec![a("p"), Formula::not(a("p"))]);
    let r = locate(&OracleScorer, &s).unwrap();
    assert!(r.removed_indices.is_empty());
    assert_eq!(r.terminal, Terminal::SizeTwoStop);
}

#[test]
fn locate_ties_go_to_the_smallest_index() {
    let s = set_of("flat", vec![a("p"), a("q"), a("r"), a("s"), a("t")]);
    let sc = fn_scorer(|_: &StatementSet| 1.0, 0.5);
    let r = locate(&sc, &s).unwrap();
    assert_eq!(r.removed_indices, vec![0, 1, 2]);
    assert_eq!(r.terminal, Terminal::SizeTwoStop);
    assert_eq!(r.trace.len(), 4);
    assert_eq!(sc.calls.get(), 1 + 5 + 4 + 3);
}

#[test]
fn locate_recovers_the_flipped_answer() {
    for seed in 0..60 {
        let w = gen_qa_world(seed, 4);
        let c = gen_qa_set(&w, "c").unwrap();
        let i = corrupt_qa(&c, seed, "i").unwrap();
        let r = locate(&OracleScorer, &i).unwrap();
        assert_eq!(Some(r.removed_indices.clone()), i.gold_inconsistent_indices, "seed {seed}");
        assert_eq!(r.terminal, Terminal::ConsistentReached);
    }
}

#[test]
fn score_file_round_trip() {
    let sets: Vec<StatementSet> = (0..5)
        .map(|k| set_of(&format!("s{k}"), vec![a("p"), if k % 2 == 0 { a("q") } else { Formula::not(a("p")) }]))
        .collect();
    let mut buf = Vec::new();
    ExternalScorer::write(&mut buf, &OracleScorer, &sets).unwrap();
    let ext = ExternalScorer::from_reader(&buf[..]).unwrap();
    for s in &sets {
        assert_eq!(verify_set(&ext, s).unwrap(), verify_set(&OracleScorer, s).unwrap());
    }
    let missing = set_of("nope", vec![a("p"), a("q")]);
    assert!(matches!(ext.score(&missing), Err(VerifyError::UnknownId(id)) if id == "nope"));
    assert!(matches!(ExternalScorer::from_reader(&b"id,score\n"[..]), Err(VerifyError::ScoreFile(_))));
    let one = ExternalScorer::from_reader(&b"threshold=0.5\nx,0.9\n"[..]).unwrap();
    assert_eq!(one.threshold(), 0.5);
    let x = set_of("x", vec![a("p"), a("q")]);
    assert_eq!(verify_set(&one, &x).unwrap().label, Label::Inconsistent);
}

/// Every subset of `idx` that is unsatisfiable while all its proper subsets
/// are satisfiable.
fn minimal_cores(s: &StatementSet) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut unsat = vec![false; 1 << n];
    for mask in 1usize..1 << n {
        let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        unsat[mask] = !oracle_consistent(&s.subset(&keep)).unwrap();
    }
    (1usize..1 << n)
        .filter(|&m| unsat[m] && (0..n).all(|i| m >> i & 1 == 0 || !unsat[m & !(1 << i)]))
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn small_inconsistent_sets() -> Vec<StatementSet> {
    let mut out = Vec::new();
    for (k, rule) in RULES.iter().filter(|r| r.label == Label::Inconsistent).enumerate() {
        let seeds: Vec<_> = (0..rule.family.seed_count())
            .map(|j| gen_seed_pair((k * 11 + j) as u64, rule.family.relation()))
            .collect();
        out.push(apply_rule(&rule.id(), &seeds, &format!("r{k}")).unwrap());
    }
    for seed in 0..20 {
        let c = gen_qa_set(&gen_qa_world(seed, 4), "c").unwrap();
        out.push(corrupt_qa(&c, seed, "i").unwrap());
    }
    out.retain(|s| (3..=8).contains(&s.len()));
    out
}

#[test]
fn oracle_locate_removes_only_core_members() {
    let sets = small_inconsistent_sets();
    assert!(sets.len() > 20);
    for s in &sets {
        let cores = minimal_cores(s);
        let r = locate(&OracleScorer, s).unwrap();
        // When every leave-one-out subset is still unsatisfiable the {0, 1}
        // scores all tie and the smallest index goes, core member or not.
        for (step, j) in r.trace.iter().zip(&r.removed_indices) {
            let min = step.leave_one_out.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
            if min < OracleScorer::THRESHOLD {
                assert!(cores.iter().any(|c| c.contains(j)), "{}: removed {j}, cores {cores:?}", s.id);
            }
        }
    }
}

proptest! {
    #[test]
    fn elementwise_is_monotone_in_mtr(bits in proptest::collection::vec(any::<bool>(), 10), m1 in 0.0f64..1.0, m2 in 0.0f64..1.0) {
        let s = set_of("five", vec![a("p"), a("q"), a("r"), a("s"), a("t")]);
        let mut scores = HashMap::new();
        let mut k = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                scores.insert(format!("five[{i},{j}]"), if bits[k] { 1.0 } else { 0.0 });
                k += 1;
            }
        }
        let ext = ExternalScorer::new(scores, 0.5);
        let (lo, hi) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
        let vlo = verify_elementwise(&ext, &s, lo).unwrap();
        let vhi = verify_elementwise(&ext, &s, hi).unwrap();
        if vlo.label == Label::Consistent {
            prop_assert_eq!(vhi.label, Label::Consistent);
        }
        let v0 = verify_elementwise(&ext, &s, 0.0).unwrap();
        prop_assert_eq!(v0.label == Label::Inconsistent, bits.iter().any(|&b| b));
    }

    #[test]
    fn locate_call_budget(n in 2usize..9, seed in any::<u64>()) {
        let s = set_of("b", (0..n).map(|i| a(&format!("x{i}"))).collect());
        let sc = fn_scorer(move |x: &StatementSet| {
            let h = crate::rng::derive(seed, &[crate::rng::tag(&x.id)]);
            (h % 1000) as f64 / 1000.0
        }, 0.1);
        let r = locate(&sc, &s).unwrap();
        let bound = 1 + (3..=n).sum::<usize>();
        prop_assert!(sc.calls.get() <= bound);
        prop_assert!(r.trace.len() < n);
        let mut seen = r.removed_indices.clone();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), r.removed_indices.len());
    }
}
