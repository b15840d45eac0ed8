use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::logic::{negate, Atom, Formula};

use super::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Consistent,
    Inconsistent,
}

impl Label {
    pub fn is_consistent(self) -> bool {
        self == Label::Consistent
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Consistent => "consistent",
            Label::Inconsistent => "inconsistent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    #[default]
    Medium,
}

/// Composition tag over {C, I}: how many consistent and inconsistent base
/// sets were merged. Rendered with every C before every I, e.g. `CCI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub consistent: usize,
    pub inconsistent: usize,
}

impl Provenance {
    pub const C: Provenance = Provenance::new(1, 0);
    pub const I: Provenance = Provenance::new(0, 1);
    pub const CC: Provenance = Provenance::new(2, 0);
    pub const CI: Provenance = Provenance::new(1, 1);
    pub const II: Provenance = Provenance::new(0, 2);

    pub const fn new(consistent: usize, inconsistent: usize) -> Self {
        Provenance {
            consistent,
            inconsistent,
        }
    }

    pub fn of(label: Label) -> Self {
        match label {
            Label::Consistent => Provenance::C,
            Label::Inconsistent => Provenance::I,
        }
    }

    /// Number of base sets merged.
    pub fn parts(&self) -> usize {
        self.consistent + self.inconsistent
    }

    pub fn label(&self) -> Label {
        if self.inconsistent == 0 {
            Label::Consistent
        } else {
            Label::Inconsistent
        }
    }

    pub fn merge(self, other: Provenance) -> Provenance {
        Provenance::new(self.consistent + other.consistent, self.inconsistent + other.inconsistent)
    }

    /// All multisets over {C, I} with 1 to `max_parts` members, ordered by size
    /// then by number of I's.
    pub fn classes(max_parts: usize) -> Vec<Provenance> {
        (1..=max_parts)
            .flat_map(|n| (0..=n).map(move |i| Provenance::new(n - i, i)))
            .collect()
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", "C".repeat(self.consistent), "I".repeat(self.inconsistent))
    }
}

impl FromStr for Provenance {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let c = s.chars().take_while(|&ch| ch == 'C').count();
        let i = s[c..].chars().take_while(|&ch| ch == 'I').count();
        if s.is_empty() || c + i != s.len() {
            return Err(DataError::Invalid(format!("bad provenance tag `{s}`")));
        }
        Ok(Provenance::new(c, i))
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Provenance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One unit of information: a standalone sentence or a question-answer pair,
/// optionally annotated with its ground-truth formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Statement {
    Sentence {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        semantics: Option<Formula>,
    },
    Qa {
        question: String,
        answer: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        semantics: Option<Formula>,
    },
}

impl Statement {
    pub fn sentence(text: impl Into<String>, semantics: Option<Formula>) -> Self {
        Statement::Sentence {
            text: text.into(),
            semantics,
        }
    }

    pub fn qa(question: impl Into<String>, answer: impl Into<String>, semantics: Option<Formula>) -> Self {
        Statement::Qa {
            question: question.into(),
            answer: answer.into(),
            semantics,
        }
    }

    pub fn semantics(&self) -> Option<&Formula> {
        match self {
            Statement::Sentence { semantics, .. } | Statement::Qa { semantics, .. } => semantics.as_ref(),
        }
    }

    pub(crate) fn semantics_mut(&mut self) -> &mut Option<Formula> {
        match self {
            Statement::Sentence { semantics, .. } | Statement::Qa { semantics, .. } => semantics,
        }
    }

    pub fn is_qa(&self) -> bool {
        matches!(self, Statement::Qa { .. })
    }
}

/// A labeled collection of statements.
///
/// `axioms` holds background knowledge that is true in the generating world
/// but not stated in the set (for example the entailment between a premise
/// and its hypothesis, or that an object has a single color). The oracle
/// treats axioms as always-on premises for the set and all of its subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementSet {
    pub id: String,
    pub statements: Vec<Statement>,
    pub label: Label,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<String>,
    #[serde(default)]
    pub difficulty: Difficulty,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_inconsistent_indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axioms: Vec<Formula>,
}

impl StatementSet {
    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn is_qa(&self) -> bool {
        self.statements.first().is_some_and(Statement::is_qa)
    }

    /// Formulas of every statement, or the index of the first statement without one.
    pub fn formulas(&self) -> Result<Vec<&Formula>, DataError> {
        self.statements
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.semantics().ok_or_else(|| DataError::MissingSemantics {
                    set: self.id.clone(),
                    index: i,
                })
            })
            .collect()
    }

    pub fn has_semantics(&self) -> bool {
        self.statements.iter().all(|s| s.semantics().is_some())
    }

    /// Atom ids referenced by statements and axioms.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for f in self.statements.iter().filter_map(Statement::semantics).chain(&self.axioms) {
            f.collect_atoms(&mut out);
        }
        out
    }

    /// The statements at `keep` (in the given order), inheriting axioms and
    /// provenance. Labels are not recomputed; scorers do not read them.
    pub fn subset(&self, keep: &[usize]) -> StatementSet {
        let suffix: Vec<String> = keep.iter().map(usize::to_string).collect();
        StatementSet {
            id: format!("{}[{}]", self.id, suffix.join(",")),
            statements: keep.iter().map(|&i| self.statements[i].clone()).collect(),
            label: self.label,
            provenance: self.provenance,
            rule_id: self.rule_id.clone(),
            difficulty: self.difficulty,
            gold_inconsistent_indices: None,
            axioms: self.axioms.clone(),
        }
    }

    /// Everything except statement `skip`.
    pub fn without(&self, skip: usize) -> StatementSet {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != skip).collect();
        self.subset(&keep)
    }

    /// Renames every atom (statements and axioms) from namespace `from` to `to`.
    pub(crate) fn rename_namespace(&mut self, from: &str, to: &str) {
        let prefix = format!("{from}.");
        let rename = |id: &str| match id.strip_prefix(&prefix) {
            Some(rest) => format!("{to}.{rest}"),
            None => id.to_string(),
        };
        for s in &mut self.statements {
            if let Some(f) = s.semantics_mut() {
                *f = f.map_atoms(&rename);
            }
        }
        for a in &mut self.axioms {
            *a = a.map_atoms(&rename);
        }
    }

    /// Structural invariants checked on load and after construction.
    pub fn check(&self) -> Result<(), DataError> {
        let fail = |reason: String| Err(DataError::Invalid(format!("set `{}`: {reason}", self.id)));
        if self.statements.len() < 2 {
            return fail(format!("has {} statements, need at least 2", self.statements.len()));
        }
        if self.provenance.label() != self.label {
            return fail(format!("label {} disagrees with provenance {}", self.label, self.provenance));
        }
        for s in &self.statements {
            if let Statement::Qa { answer, .. } = s {
                if answer.trim().is_empty() {
                    return fail("empty answer".into());
                }
            }
        }
        if let Some(gold) = &self.gold_inconsistent_indices {
            if gold.iter().any(|&g| g >= self.len()) {
                return fail("gold index out of range".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Entailment,
    Contradiction,
    Neutral,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Entailment => "entailment",
            Relation::Contradiction => "contradiction",
            Relation::Neutral => "neutral",
        })
    }
}

/// A premise/hypothesis pair whose relation is certified by the oracle.
///
/// Atom ids are the local symbols `p` and `h`; rule application renames them
/// into the namespace of the set being built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPair {
    pub premise: Atom,
    pub hypothesis: Atom,
    pub relation: Relation,
}

impl SeedPair {
    pub fn premise_formula(&self) -> Formula {
        self.premise.formula()
    }

    pub fn hypothesis_formula(&self) -> Formula {
        self.hypothesis.formula()
    }

    pub fn premise_text(&self) -> &str {
        &self.premise.surface_pos
    }

    pub fn hypothesis_text(&self) -> &str {
        &self.hypothesis.surface_pos
    }

    /// World knowledge encoding the relation: `p -> h` for entailment,
    /// `not p or not h` for contradiction, nothing for neutral pairs.
    pub fn axioms(&self) -> Vec<Formula> {
        let (p, h) = (self.premise_formula(), self.hypothesis_formula());
        match self.relation {
            Relation::Entailment => vec![Formula::implies(p, h)],
            Relation::Contradiction => vec![Formula::or(negate(&p), negate(&h))],
            Relation::Neutral => Vec::new(),
        }
    }

    /// Verifies that the oracle agrees with the declared relation.
    pub fn certify(&self) -> Result<(), DataError> {
        use crate::logic::is_satisfiable_with;
        let axioms = self.axioms();
        let ax: Vec<&Formula> = axioms.iter().collect();
        let (p, h) = (self.premise_formula(), self.hypothesis_formula());
        let (np, nh) = (negate(&p), negate(&h));
        let sat = |a: &Formula, b: &Formula| is_satisfiable_with(&[a, b], &ax);
        let p_h = sat(&p, &h)?;
        let p_nh = sat(&p, &nh)?;
        let np_h = sat(&np, &h)?;
        let np_nh = sat(&np, &nh)?;
        let ok = match self.relation {
            // strict: the hypothesis does not entail the premise back
            Relation::Entailment => !p_nh && p_h && np_h,
            Relation::Contradiction => !p_h && p_nh && np_h,
            Relation::Neutral => p_h && p_nh && np_h && np_nh,
        };
        if ok {
            Ok(())
        } else {
            Err(DataError::Invalid(format!(
                "seed pair `{}` / `{}` is not certified as {}",
                self.premise_text(),
                self.hypothesis_text(),
                self.relation
            )))
        }
    }
}

/// One object, one attribute, its true value and the values asked about
/// with a "no" answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaWorld {
    pub object: String,
    pub attribute_type: String,
    pub true_value: String,
    pub distractor_values: Vec<String>,
}

impl QaWorld {
    pub fn check(&self) -> Result<(), DataError> {
        let mut seen = BTreeSet::new();
        seen.insert(self.true_value.as_str());
        for d in &self.distractor_values {
            if !seen.insert(d.as_str()) {
                return Err(DataError::Invalid(format!("duplicate value `{d}` in QA world")));
            }
        }
        if self.distractor_values.is_empty() {
            return Err(DataError::Invalid("QA world needs at least one distractor".into()));
        }
        Ok(())
    }
}

/// Four disjoint splits of base (single-provenance) sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Vec<StatementSet>,
    pub validation1: Vec<StatementSet>,
    pub validation2: Vec<StatementSet>,
    pub test: Vec<StatementSet>,
}

impl DatasetSplit {
    pub const NAMES: [&'static str; 4] = ["train", "validation1", "validation2", "test"];

    pub fn parts(&self) -> [(&'static str, &Vec<StatementSet>); 4] {
        [
            ("train", &self.train),
            ("validation1", &self.validation1),
            ("validation2", &self.validation2),
            ("test", &self.test),
        ]
    }

    pub fn all(&self) -> impl Iterator<Item = &StatementSet> {
        self.train
            .iter()
            .chain(&self.validation1)
            .chain(&self.validation2)
            .chain(&self.test)
    }
}

/// Splits a base pool by label.
pub fn partition(sets: &[StatementSet]) -> (Vec<&StatementSet>, Vec<&StatementSet>) {
    sets.iter().partition(|s| s.label.is_consistent())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_classes_enumerate_fourteen() {
        let names: Vec<String> = Provenance::classes(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(
            names,
            ["C", "I", "CC", "CI", "II", "CCC", "CCI", "CII", "III", "CCCC", "CCCI", "CCII", "CIII", "IIII"]
        );
    }

    #[test]
    fn provenance_parse() {
        assert_eq!("CCI".parse::<Provenance>().unwrap(), Provenance::new(2, 1));
        assert!("IC".parse::<Provenance>().is_err());
        assert!("".parse::<Provenance>().is_err());
        assert!("CX".parse::<Provenance>().is_err());
        assert_eq!(Provenance::CI.label(), Label::Inconsistent);
        assert_eq!(Provenance::CC.label(), Label::Consistent);
    }

    #[test]
    fn statement_json_shape() {
        let s = Statement::qa("is desk pink?", "no", Some("(not d.pink)".parse().unwrap()));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"kind":"qa","question":"is desk pink?","answer":"no","semantics":"(not d.pink)"}"#
        );
        let bare: Statement = serde_json::from_str(r#"{"kind":"sentence","text":"A dog runs."}"#).unwrap();
        assert_eq!(bare.semantics(), None);
    }
}
