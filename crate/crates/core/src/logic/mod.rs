//! Propositional semantics: formulas over named atoms, an exact truth-table
//! satisfiability oracle, and English surface realization.

mod formula;
mod oracle;
mod realize;

pub use formula::{evaluate, negate, Atom, Formula, Valuation};
pub use oracle::{find_model, inconsistency_degree, is_satisfiable, is_satisfiable_with, MAX_ATOMS};
pub use realize::{realize, AtomTable};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("atom `{0}` has no assignment")]
    UnassignedAtom(String),
    #[error("{0} distinct atoms exceed the truth-table budget of {MAX_ATOMS}")]
    AtomBudgetExceeded(usize),
    #[error("atom `{0}` is not declared")]
    UnknownAtom(String),
    #[error("invalid atom id `{0}`")]
    InvalidAtomId(String),
    #[error("atom `{0}` has identical affirmative and negative templates")]
    IdenticalSurfaces(String),
    #[error("cannot parse formula `{input}`: {reason}")]
    Parse { input: String, reason: String },
}
