//! Set-construction rules over one or two seed pairs.
//!
//! Each row lists the member formulas over the local symbols `p1 h1` (first
//! seed) and `p2 h2` (second seed), the label and the difficulty. Seed axioms
//! (for instance `p1 -> h1` for an entailment seed) are attached to every
//! generated set as background knowledge.

use std::fmt;

use crate::logic::{realize, AtomTable, Formula};

use super::types::{Difficulty, Label, Provenance, Relation, SeedPair, Statement, StatementSet};
use super::{check_label, DataError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleFamily {
    /// One entailment seed.
    SingleEntailment,
    /// One contradiction seed.
    SingleContradiction,
    /// One neutral seed.
    SingleNeutral,
    /// Two entailment seeds.
    DoubleEntailment,
}

impl RuleFamily {
    pub const ALL: [RuleFamily; 4] = [
        RuleFamily::SingleEntailment,
        RuleFamily::SingleContradiction,
        RuleFamily::SingleNeutral,
        RuleFamily::DoubleEntailment,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            RuleFamily::SingleEntailment => "SE",
            RuleFamily::SingleContradiction => "SC",
            RuleFamily::SingleNeutral => "SN",
            RuleFamily::DoubleEntailment => "DE",
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            RuleFamily::SingleEntailment | RuleFamily::DoubleEntailment => Relation::Entailment,
            RuleFamily::SingleContradiction => Relation::Contradiction,
            RuleFamily::SingleNeutral => Relation::Neutral,
        }
    }

    pub fn seed_count(self) -> usize {
        match self {
            RuleFamily::DoubleEntailment => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for RuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Rule {
    pub family: RuleFamily,
    pub number: u8,
    pub description: &'static str,
    pub members: &'static [&'static str],
    pub label: Label,
    pub difficulty: Difficulty,
}

impl Rule {
    pub fn id(&self) -> String {
        format!("{}-{}", self.family.prefix(), self.number)
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

use Difficulty::{Easy, Medium};
use Label::{Consistent as Con, Inconsistent as Inc};
use RuleFamily::{DoubleEntailment as DE, SingleContradiction as SC, SingleEntailment as SE, SingleNeutral as SN};

const fn rule(
    family: RuleFamily,
    number: u8,
    description: &'static str,
    members: &'static [&'static str],
    label: Label,
    difficulty: Difficulty,
) -> Rule {
    Rule {
        family,
        number,
        description,
        members,
        label,
        difficulty,
    }
}

const IMP: &str = "(implies p1 h1)";
const CONTRA: &str = "(implies (not h1) (not p1))";
const MAT: &str = "(or (not p1) h1)";
const NP: &str = "(not p1)";
const NH: &str = "(not h1)";
const OR: &str = "(or p1 h1)";

pub static RULES: &[Rule] = &[
    rule(SE, 1, "Transposition", &[IMP, CONTRA], Con, Medium),
    rule(SE, 2, "Material Implication", &[IMP, MAT], Con, Medium),
    rule(SE, 3, "Split Hypothesis of Rule 2 (1)", &[IMP, "h1"], Con, Medium),
    rule(SE, 4, "Split Hypothesis of Rule 2 (2)", &[IMP, NP], Con, Medium),
    rule(SE, 5, "Modus Ponens", &[IMP, "p1", "h1"], Con, Medium),
    rule(SE, 6, "Modus Tollens", &[IMP, NH, NP], Con, Medium),
    // Usually listed as consistent, but with p1 entailing h1 the
    // members `not h1` and `p1` cannot both hold (compare SE-26), so the
    // oracle-certified label is inconsistent.
    rule(SE, 7, "Disjunctive Syllogism (1)", &[OR, NH, "p1"], Inc, Medium),
    rule(SE, 8, "Disjunctive Syllogism (2)", &[OR, NP, "h1"], Con, Medium),
    rule(SE, 9, "Rule 1 + 2", &[IMP, CONTRA, MAT], Con, Medium),
    rule(SE, 10, "Rule 1 + 3", &[IMP, CONTRA, "h1"], Con, Medium),
    rule(SE, 11, "Rule 1 + 4", &[IMP, CONTRA, NP], Con, Medium),
    rule(SE, 12, "Rule 2 + 3", &[IMP, MAT, "h1"], Con, Medium),
    rule(SE, 13, "Rule 2 + 4", &[IMP, MAT, NP], Con, Medium),
    rule(SE, 14, "Rule 3 + 4", &[IMP, NP, "h1"], Con, Medium),
    rule(SE, 15, "Rule 1 + 5", &[IMP, CONTRA, "p1", "h1"], Con, Medium),
    rule(SE, 16, "Rule 1 + 6", &[IMP, CONTRA, NP, NH], Con, Medium),
    rule(SE, 17, "Rule 2 + 5", &[IMP, MAT, "p1", "h1"], Con, Medium),
    rule(SE, 18, "Rule 2 + 6", &[IMP, MAT, NP, NH], Con, Medium),
    rule(SE, 19, "Rule 1 + 2 + 3", &[IMP, MAT, CONTRA, "h1"], Con, Medium),
    rule(SE, 20, "Rule 1 + 2 + 4", &[IMP, MAT, CONTRA, NP], Con, Medium),
    rule(SE, 21, "Rule 1 + 3 + 4", &[IMP, CONTRA, NP, "h1"], Con, Medium),
    rule(SE, 22, "Rule 2 + 3 + 4", &[IMP, MAT, NP, "h1"], Con, Medium),
    rule(SE, 23, "Rule 1 + 2 + 5", &[IMP, MAT, CONTRA, "p1", "h1"], Con, Medium),
    rule(SE, 24, "Rule 1 + 2 + 6", &[IMP, MAT, CONTRA, NP, NH], Con, Medium),
    rule(SE, 25, "Rule 1 + 2 + 3 + 4", &[IMP, MAT, CONTRA, NP, "h1"], Con, Medium),
    rule(SE, 26, "Negate Hypothesis (1)", &["p1", NH], Inc, Medium),
    rule(SE, 27, "Negate Hypothesis (2)", &["p1", NH, IMP], Inc, Medium),
    rule(SE, 28, "Negate Hypothesis of Rule 7", &[OR, NP, NH], Inc, Medium),
    rule(SE, 29, "Implicit Negate Hypothesis of Rule 7", &[OR, IMP, NH], Inc, Medium),
    rule(SE, 30, "Rule 6 + Rule 26", &[IMP, NH, NP, "p1"], Inc, Easy),
    rule(SE, 31, "Rule 6 + Rule 3", &[IMP, NH, NP, "h1"], Inc, Easy),
    rule(SE, 32, "Rule 5 + Rule 4", &[IMP, "p1", "h1", NP], Inc, Easy),
    rule(SE, 33, "Rule 5 + Rule 26", &[IMP, "p1", "h1", NH], Inc, Easy),
    rule(SE, 34, "Rule 1 + Rule 26", &[IMP, CONTRA, "p1", NH], Inc, Medium),
    rule(SE, 35, "Rule 2 + Rule 26", &[IMP, MAT, "p1", NH], Inc, Medium),
    rule(SE, 36, "Rule 6 + Rule 5", &[IMP, NH, NP, "p1", "h1"], Inc, Easy),
    rule(SC, 1, "Negate Premise", &[NP, "h1"], Con, Medium),
    rule(SC, 2, "Negate Hypothesis", &["p1", NH], Con, Medium),
    rule(SC, 3, "Disjunctive Syllogism (1)", &[OR, NH, "p1"], Con, Medium),
    rule(SC, 4, "Disjunctive Syllogism (2)", &[OR, NP, "h1"], Con, Medium),
    rule(SC, 5, "Disjunction + Seed Pair", &[OR, "p1", "h1"], Inc, Medium),
    rule(SC, 6, "Negate Hypothesis of Rule 3", &[OR, NP, NH], Inc, Medium),
    rule(SN, 1, "Disjunctive Syllogism 1", &[OR, NH, "p1"], Con, Medium),
    rule(SN, 2, "Disjunctive Syllogism 2", &[OR, NP, "h1"], Con, Medium),
    rule(SN, 3, "Negate Hypothesis of Rule 1", &[OR, NP, NH], Inc, Medium),
    rule(
        DE,
        1,
        "Constructive Dilemma",
        &["(implies p1 h1)", "(implies p2 h2)", "(or p1 p2)", "(or h1 h2)"],
        Con,
        Medium,
    ),
    rule(
        DE,
        2,
        "Destructive Dilemma",
        &["(implies p1 h1)", "(implies p2 h2)", "(or (not h1) (not h2))", "(or (not p1) (not p2))"],
        Con,
        Medium,
    ),
    rule(
        DE,
        3,
        "Bidirectional Dilemma",
        &["(implies p1 h1)", "(implies p2 h2)", "(or p1 (not h2))", "(or h1 (not p2))"],
        Con,
        Medium,
    ),
    rule(
        DE,
        4,
        "Negate Hypothesis of Constructive Dilemma",
        &["(implies p1 h1)", "(implies p2 h2)", "(or p1 p2)", "(not h1)", "(not h2)"],
        Inc,
        Medium,
    ),
    rule(
        DE,
        5,
        "Negate Hypothesis of Destructive Dilemma",
        &["(implies p1 h1)", "(implies p2 h2)", "(or (not h1) (not h2))", "p1", "p2"],
        Inc,
        Medium,
    ),
    rule(
        DE,
        6,
        "Negate Hypothesis of Bidirectional Dilemma",
        &["(implies p1 h1)", "(implies p2 h2)", "(or p1 (not h2))", "(not h1)", "p2"],
        Inc,
        Medium,
    ),
];

pub fn find_rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id() == id)
}

pub fn rules_in(family: RuleFamily, label: Label) -> impl Iterator<Item = &'static Rule> {
    RULES.iter().filter(move |r| r.family == family && r.label == label)
}

/// Mean member count over the whole inventory with every rule equally likely.
pub fn mean_rule_size() -> f64 {
    RULES.iter().map(|r| r.size() as f64).sum::<f64>() / RULES.len() as f64
}

/// Instantiates `rule_id` over `seeds` as a set named `set_id`.
///
/// Atoms are renamed into the namespace `set_id`, members are realized to
/// English, seed axioms are attached and the table label is re-checked
/// against the oracle.
pub fn apply_rule(rule_id: &str, seeds: &[SeedPair], set_id: &str) -> Result<StatementSet, DataError> {
    let rule = find_rule(rule_id).ok_or_else(|| DataError::UnknownRule(rule_id.to_string()))?;
    if seeds.len() != rule.family.seed_count() {
        return Err(DataError::Invalid(format!(
            "rule {rule_id} takes {} seed pair(s), got {}",
            rule.family.seed_count(),
            seeds.len()
        )));
    }
    let expected = rule.family.relation();
    if let Some(bad) = seeds.iter().find(|s| s.relation != expected) {
        return Err(DataError::RelationMismatch {
            rule: rule_id.to_string(),
            expected,
            found: bad.relation,
        });
    }

    let local = |sym: &str, k: usize| format!("{sym}{}", k + 1);
    let global = |sym: &str| format!("{set_id}.{sym}");

    let mut atoms = AtomTable::new();
    let mut axioms = Vec::new();
    for (k, seed) in seeds.iter().enumerate() {
        for (sym, atom) in [("p", &seed.premise), ("h", &seed.hypothesis)] {
            let mut renamed = atom.clone();
            renamed.id = global(&local(sym, k));
            atoms.insert(renamed);
        }
        let to_global = |id: &str| global(&local(id, k));
        axioms.extend(seed.axioms().iter().map(|a| a.map_atoms(&to_global)));
    }

    let statements = rule
        .members
        .iter()
        .map(|m| {
            let f: Formula = m.parse().expect("rule table formulas parse");
            let f = f.map_atoms(&|id| global(id));
            let text = realize(&f, &atoms)?;
            Ok(Statement::sentence(text, Some(f)))
        })
        .collect::<Result<Vec<_>, DataError>>()?;

    let set = StatementSet {
        id: set_id.to_string(),
        statements,
        label: rule.label,
        provenance: Provenance::of(rule.label),
        rule_id: Some(rule.id()),
        difficulty: rule.difficulty,
        gold_inconsistent_indices: None,
        axioms,
    };
    check_label(&set)?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_seed_pair;

    fn entail(seed: u64) -> SeedPair {
        gen_seed_pair(seed, Relation::Entailment)
    }

    #[test]
    fn inventory_shape() {
        let count = |f| RULES.iter().filter(|r| r.family == f).count();
        assert_eq!(count(SE), 36);
        assert_eq!(count(SC), 6);
        assert_eq!(count(SN), 3);
        assert_eq!(count(DE), 6);
        assert!(RULES.iter().all(|r| (2..=5).contains(&r.size())));
        // easy only on inconsistent rows
        assert!(RULES.iter().filter(|r| r.difficulty == Easy).all(|r| r.label == Inc));
    }

    #[test]
    fn modus_tollens() {
        let set = apply_rule("SE-6", &[entail(1)], "s").unwrap();
        let fs: Vec<String> = set.formulas().unwrap().iter().map(|f| f.to_string()).collect();
        assert_eq!(fs, ["(implies s.p1 s.h1)", "(not s.h1)", "(not s.p1)"]);
        assert_eq!(set.label, Label::Consistent);
        assert_eq!(set.difficulty, Medium);
        assert_eq!(set.axioms, vec!["(implies s.p1 s.h1)".parse().unwrap()]);
    }

    #[test]
    fn implicit_negate_hypothesis() {
        let set = apply_rule("SE-29", &[entail(2)], "s").unwrap();
        let fs: Vec<String> = set.formulas().unwrap().iter().map(|f| f.to_string()).collect();
        assert_eq!(fs, ["(or s.p1 s.h1)", "(implies s.p1 s.h1)", "(not s.h1)"]);
        assert_eq!(set.label, Label::Inconsistent);
    }

    #[test]
    fn negate_hypothesis_of_constructive_dilemma() {
        let set = apply_rule("DE-4", &[entail(3), entail(4)], "d").unwrap();
        let fs: Vec<String> = set.formulas().unwrap().iter().map(|f| f.to_string()).collect();
        assert_eq!(
            fs,
            ["(implies d.p1 d.h1)", "(implies d.p2 d.h2)", "(or d.p1 d.p2)", "(not d.h1)", "(not d.h2)"]
        );
        assert_eq!(set.label, Label::Inconsistent);
    }

    #[test]
    fn realized_text_follows_templates() {
        let seed = entail(5);
        let set = apply_rule("SE-6", std::slice::from_ref(&seed), "s").unwrap();
        let Statement::Sentence { text, .. } = &set.statements[0] else { panic!() };
        assert!(text.starts_with("If "));
        assert!(text.contains(", then "));
        assert!(text.contains(&seed.hypothesis.surface_pos));
    }

    #[test]
    fn every_rule_certifies_on_many_seeds() {
        for rule in RULES {
            for s in 0..10u64 {
                let seeds: Vec<SeedPair> = (0..rule.family.seed_count() as u64)
                    .map(|k| gen_seed_pair(s * 7 + k, rule.family.relation()))
                    .collect();
                let set = apply_rule(&rule.id(), &seeds, "x").unwrap();
                assert_eq!(set.len(), rule.size());
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(apply_rule("SE-99", &[entail(1)], "s"), Err(DataError::UnknownRule(_))));
        let neutral = gen_seed_pair(1, Relation::Neutral);
        assert!(matches!(
            apply_rule("SE-6", &[neutral], "s"),
            Err(DataError::RelationMismatch { .. })
        ));
        assert!(apply_rule("DE-1", &[entail(1)], "s").is_err());
    }

    #[test]
    fn uniform_mean_size_is_between_two_and_five() {
        // 177 members over 51 rules.
        let total: usize = RULES.iter().map(Rule::size).sum();
        assert_eq!((total, RULES.len()), (177, 51));
        let m = mean_rule_size();
        assert!(m > 2.0 && m < 5.0, "{m}");
    }
}
