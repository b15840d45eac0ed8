use rand::seq::SliceRandom;

use crate::logic::{realize, AtomTable, Formula};
use crate::rng;

use super::rules::{rules_in, RuleFamily};
use super::types::{Difficulty, Label, Provenance, Relation, SeedPair, Statement, StatementSet};
use super::{apply_rule, check_label, DataError};

const PATTERNS: [(&str, &str, &str); 4] = [
    ("PW-1", "p", "(not p)"),
    ("PW-2", "h", "(not h)"),
    ("PW-3", "p", "(not h)"),
    ("PW-4", "(or p h)", "(not h)"),
];

fn pattern_set(seed: &SeedPair, k: usize, set_id: &str) -> Result<StatementSet, DataError> {
    let (rule, a, b) = PATTERNS[k];
    let ns = |id: &str| format!("{set_id}.{id}");
    let mut atoms = AtomTable::new();
    for atom in [&seed.premise, &seed.hypothesis] {
        let mut renamed = atom.clone();
        renamed.id = ns(&atom.id);
        atoms.insert(renamed);
    }
    let statements = [a, b]
        .iter()
        .map(|src| {
            let f = src.parse::<Formula>()?.map_atoms(&ns);
            Ok(Statement::sentence(realize(&f, &atoms)?, Some(f)))
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    let set = StatementSet {
        id: set_id.to_string(),
        statements,
        label: Label::Inconsistent,
        provenance: Provenance::I,
        rule_id: Some(rule.into()),
        difficulty: if k < 2 { Difficulty::Easy } else { Difficulty::Medium },
        gold_inconsistent_indices: None,
        axioms: seed.axioms().iter().map(|f| f.map_atoms(&ns)).collect(),
    };
    check_label(&set)?;
    Ok(set)
}

fn pair_of(s: &StatementSet, i: usize, j: usize, id: String, label: Label, rule: &str) -> StatementSet {
    let mut out = s.subset(&[i, j]);
    out.id = id;
    out.label = label;
    out.provenance = Provenance::of(label);
    out.rule_id = Some(rule.into());
    out.difficulty = Difficulty::Medium;
    out.rename_namespace(&s.id, &out.id.clone());
    out
}

/// Size-2 sets for element-wise scoring.
///
/// Every entailment seed yields the four inconsistent patterns `{p, not p}`,
/// `{h, not h}`, `{p, not h}` and `{p or h, not h}` (the last one only under
/// the entailment axiom, which is recorded) plus one consistent 2-subset of a
/// consistent rule set over the same seed. Consistent QA sets contribute one
/// random pair; corrupted QA sets contribute the flipped statement together
/// with a statement it conflicts with.
pub fn derive_pairwise_dataset(
    seeds: &[SeedPair],
    qa_sets: &[StatementSet],
    rng_seed: u64,
) -> Result<Vec<StatementSet>, DataError> {
    let consistent_rules: Vec<_> = rules_in(RuleFamily::SingleEntailment, Label::Consistent).collect();
    let mut out = Vec::new();
    for (n, seed) in seeds.iter().enumerate() {
        if seed.relation != Relation::Entailment {
            return Err(DataError::RelationMismatch {
                rule: "PW".into(),
                expected: Relation::Entailment,
                found: seed.relation,
            });
        }
        for k in 0..PATTERNS.len() {
            out.push(pattern_set(seed, k, &format!("pw-{n:05}-{}", k + 1))?);
        }
        let mut rng = rng::stream(rng_seed, &[rng::tag("pw-consistent"), n as u64]);
        let rule = consistent_rules.choose(&mut rng).unwrap();
        let full = apply_rule(&rule.id(), std::slice::from_ref(seed), &format!("pw-{n:05}-src"))?;
        let mut idx: Vec<usize> = (0..full.len()).collect();
        idx.shuffle(&mut rng);
        let pair = pair_of(&full, idx[0], idx[1], format!("pw-{n:05}-c"), Label::Consistent, "PW-C");
        check_label(&pair)?;
        out.push(pair);
    }

    for (n, s) in qa_sets.iter().enumerate() {
        let mut rng = rng::stream(rng_seed, &[rng::tag("pw-qa"), n as u64]);
        let id = format!("pw-qa-{n:05}");
        let pair = if s.label.is_consistent() {
            let mut idx: Vec<usize> = (0..s.len()).collect();
            idx.shuffle(&mut rng);
            let (i, j) = (idx[0].min(idx[1]), idx[0].max(idx[1]));
            pair_of(s, i, j, id, Label::Consistent, "QA-PAIR")
        } else {
            let g = s
                .gold_inconsistent_indices
                .as_ref()
                .and_then(|g| g.first().copied())
                .ok_or_else(|| DataError::Invalid(format!("set `{}` has no gold index", s.id)))?;
            let mut found = None;
            for j in (0..s.len()).filter(|&j| j != g) {
                let cand = pair_of(s, g.min(j), g.max(j), id.clone(), Label::Inconsistent, "QA-PAIR");
                if !super::oracle_consistent(&cand)? {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or_else(|| DataError::Invalid(format!("no conflicting pair in `{}`", s.id)))?
        };
        check_label(&pair)?;
        out.push(pair);
    }
    Ok(out)
}
