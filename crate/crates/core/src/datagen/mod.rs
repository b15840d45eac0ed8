//! Labeled statement-set generation: rule-table sentence sets, QA sets with
//! answer corruption, union composition, pairwise data and splits.

mod compose;
mod jsonl;
pub mod lexicon;
mod pairwise;
mod qa;
mod rules;
mod seeds;
mod splits;
mod types;

use crate::logic::{inconsistency_degree, Formula, LogicError};

pub use compose::{compatible, compose_mixture, compose_union, draw_parts, surface_keys};
pub use jsonl::{load_jsonl, load_splits, read_jsonl, save_jsonl, save_splits, write_jsonl};
pub use pairwise::derive_pairwise_dataset;
pub use qa::{corrupt_qa, gen_qa_set, gen_qa_world, restoring_indices};
pub use rules::{apply_rule, find_rule, mean_rule_size, rules_in, Rule, RuleFamily, RULES};
pub use seeds::gen_seed_pair;
pub use splits::{build_splits, size_histogram, SplitConfig, Style};
pub use types::{
    partition, DatasetSplit, Difficulty, Label, Provenance, QaWorld, Relation, SeedPair, Statement,
    StatementSet,
};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("rule {rule} expects {expected} seed pairs, got {found}")]
    RelationMismatch {
        rule: String,
        expected: Relation,
        found: Relation,
    },
    #[error("unknown rule id `{0}`")]
    UnknownRule(String),
    #[error("atom namespaces collide between union parts (atom `{0}`)")]
    NamespaceCollision(String),
    #[error("statement {index} of set `{set}` has no semantics")]
    MissingSemantics { set: String, index: usize },
    #[error("line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("no rules available for {0}")]
    InsufficientRuleCoverage(String),
    #[error("pool exhausted: {0}")]
    PoolExhausted(String),
    #[error("set `{set}` is labeled {label} but the oracle disagrees")]
    LabelMismatch { set: String, label: Label },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Exact satisfiability of a set's statements together with its axioms.
pub fn oracle_consistent(s: &StatementSet) -> Result<bool, DataError> {
    let fs = s.formulas()?;
    let ax: Vec<&Formula> = s.axioms.iter().collect();
    Ok(inconsistency_degree(&fs, &ax)? == Some(0))
}

/// True iff the stored label agrees with the oracle.
pub fn validate_with_oracle(s: &StatementSet) -> Result<bool, DataError> {
    Ok(oracle_consistent(s)? == s.label.is_consistent())
}

pub(crate) fn check_label(s: &StatementSet) -> Result<(), DataError> {
    s.check()?;
    if validate_with_oracle(s)? {
        Ok(())
    } else {
        Err(DataError::LabelMismatch {
            set: s.id.clone(),
            label: s.label,
        })
    }
}
