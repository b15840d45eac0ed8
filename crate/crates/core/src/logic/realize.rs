use std::collections::BTreeMap;

use super::{Atom, Formula, LogicError};

/// Atoms addressable by id, used to render formulas as English.
#[derive(Debug, Clone, Default)]
pub struct AtomTable(BTreeMap<String, Atom>);

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, atom: Atom) {
        self.0.insert(atom.id.clone(), atom);
    }

    pub fn get(&self, id: &str) -> Option<&Atom> {
        self.0.get(id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Atom> for AtomTable {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        let mut t = AtomTable::new();
        for a in iter {
            t.insert(a);
        }
        t
    }
}

/// Renders `f` as a single English sentence ending in a period.
///
/// Atoms use their affirmative template, a negated atom its negative
/// template, `Or` becomes "Either A, or B." and `Implies` "If A, then B.".
/// Negation of anything other than an atom is spelled out as
/// "It is not the case that ...".
pub fn realize(f: &Formula, atoms: &AtomTable) -> Result<String, LogicError> {
    let body = clause(f, atoms)?;
    Ok(format!("{}.", capitalize(&body)))
}

fn clause(f: &Formula, atoms: &AtomTable) -> Result<String, LogicError> {
    let lookup = |id: &str| atoms.get(id).ok_or_else(|| LogicError::UnknownAtom(id.to_string()));
    Ok(match f {
        Formula::Atom(id) => decapitalize(&lookup(id)?.surface_pos),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(id) => decapitalize(&lookup(id)?.surface_neg),
            other => format!("it is not the case that {}", clause(other, atoms)?),
        },
        Formula::Or(a, b) => format!("either {}, or {}", clause(a, atoms)?, clause(b, atoms)?),
        Formula::Implies(a, b) => format!("if {}, then {}", clause(a, atoms)?, clause(b, atoms)?),
    })
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Lowercases the first letter unless the first word looks like an acronym.
fn decapitalize(s: &str) -> String {
    let first_word = s.split_whitespace().next().unwrap_or("");
    let acronym = first_word.chars().count() > 1 && first_word.chars().all(|c| !c.is_lowercase());
    if acronym {
        return s.to_string();
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn couple() -> AtomTable {
        [
            Atom::new(
                "p",
                "a couple walk hand in hand down a street",
                "No couple walks hand in hand down a street",
            )
            .unwrap(),
            Atom::new("h", "a couple is walking together", "No couple is walking together").unwrap(),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn implication_sentence() {
        let f = Formula::implies(Formula::atom("p"), Formula::atom("h"));
        assert_eq!(
            realize(&f, &couple()).unwrap(),
            "If a couple walk hand in hand down a street, then a couple is walking together."
        );
    }

    #[test]
    fn negated_atom_uses_negative_template() {
        let f = Formula::not(Formula::atom("h"));
        assert_eq!(realize(&f, &couple()).unwrap(), "No couple is walking together.");
    }

    #[test]
    fn disjunction_and_nested_negation() {
        let or = Formula::or(Formula::atom("p"), Formula::atom("h"));
        assert_eq!(
            realize(&or, &couple()).unwrap(),
            "Either a couple walk hand in hand down a street, or a couple is walking together."
        );
        assert_eq!(
            realize(&Formula::not(or), &couple()).unwrap(),
            "It is not the case that either a couple walk hand in hand down a street, or a couple is walking together."
        );
        let or_neg = Formula::or(Formula::not(Formula::atom("p")), Formula::atom("h"));
        assert_eq!(
            realize(&or_neg, &couple()).unwrap(),
            "Either no couple walks hand in hand down a street, or a couple is walking together."
        );
    }

    #[test]
    fn acronyms_keep_case() {
        let t: AtomTable = [Atom::new("t", "AM trains run", "no AM trains run").unwrap()]
            .into_iter()
            .collect();
        let f = Formula::implies(Formula::atom("t"), Formula::atom("t"));
        assert_eq!(realize(&f, &t).unwrap(), "If AM trains run, then AM trains run.");
    }

    #[test]
    fn unknown_atom_is_an_error() {
        assert!(realize(&Formula::atom("zz"), &couple()).is_err());
    }
}
