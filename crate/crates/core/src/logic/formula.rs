use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LogicError;

/// A propositional symbol together with the sentence templates used to render it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub id: String,
    pub surface_pos: String,
    pub surface_neg: String,
}

impl Atom {
    pub fn new(
        id: impl Into<String>,
        surface_pos: impl Into<String>,
        surface_neg: impl Into<String>,
    ) -> Result<Self, LogicError> {
        let atom = Atom {
            id: id.into(),
            surface_pos: surface_pos.into(),
            surface_neg: surface_neg.into(),
        };
        if !is_valid_atom_id(&atom.id) {
            return Err(LogicError::InvalidAtomId(atom.id));
        }
        if atom.surface_pos == atom.surface_neg {
            return Err(LogicError::IdenticalSurfaces(atom.id));
        }
        Ok(atom)
    }

    pub fn formula(&self) -> Formula {
        Formula::atom(self.id.clone())
    }
}

pub(crate) fn is_valid_atom_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(|c| c.is_whitespace() || c == '(' || c == ')')
}

/// Statement-level propositional expression. There is deliberately no
/// conjunction node: a conjunction is split into separate statements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(id: impl Into<String>) -> Self {
        Formula::Atom(id.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Ids of every atom referenced by the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(id) => {
                out.insert(id.as_str());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Rewrites every atom id with `f`, keeping the structure intact.
    pub fn map_atoms(&self, f: &impl Fn(&str) -> String) -> Formula {
        match self {
            Formula::Atom(id) => Formula::Atom(f(id)),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
        }
    }
}

/// Truth assignment keyed by atom id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(pub BTreeMap<String, bool>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, id: impl Into<String>, value: bool) -> Self {
        self.0.insert(id.into(), value);
        self
    }

    pub fn get(&self, id: &str) -> Option<bool> {
        self.0.get(id).copied()
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (S, bool)>>(iter: T) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Classical truth value of `f` under `v`.
pub fn evaluate(f: &Formula, v: &Valuation) -> Result<bool, LogicError> {
    Ok(match f {
        Formula::Atom(id) => v
            .get(id)
            .ok_or_else(|| LogicError::UnassignedAtom(id.clone()))?,
        Formula::Not(g) => !evaluate(g, v)?,
        Formula::Or(a, b) => {
            let (x, y) = (evaluate(a, v)?, evaluate(b, v)?);
            x || y
        }
        Formula::Implies(a, b) => {
            let (x, y) = (evaluate(a, v)?, evaluate(b, v)?);
            !x || y
        }
    })
}

/// `Not(f)`, collapsing a double negation.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::not(other.clone()),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(id) => out.write_str(id),
            Formula::Not(f) => write!(out, "(not {f})"),
            Formula::Or(a, b) => write!(out, "(or {a} {b})"),
            Formula::Implies(a, b) => write!(out, "(implies {a} {b})"),
        }
    }
}

impl FromStr for Formula {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = lex(s);
        let mut pos = 0;
        let f = parse_expr(&tokens, &mut pos, s)?;
        if pos != tokens.len() {
            return Err(LogicError::Parse {
                input: s.to_string(),
                reason: "trailing tokens".into(),
            });
        }
        Ok(f)
    }
}

fn lex(s: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(st) = start.take() {
                tokens.push(&s[st..i]);
            }
            if !c.is_whitespace() {
                tokens.push(&s[i..i + 1]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        tokens.push(&s[st..]);
    }
    tokens
}

fn parse_expr(tokens: &[&str], pos: &mut usize, input: &str) -> Result<Formula, LogicError> {
    let err = |reason: &str| LogicError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let tok = *tokens.get(*pos).ok_or_else(|| err("unexpected end of input"))?;
    *pos += 1;
    match tok {
        "(" => {
            let op = *tokens.get(*pos).ok_or_else(|| err("missing operator"))?;
            *pos += 1;
            let f = match op {
                "not" => Formula::not(parse_expr(tokens, pos, input)?),
                "or" => {
                    let a = parse_expr(tokens, pos, input)?;
                    Formula::or(a, parse_expr(tokens, pos, input)?)
                }
                "implies" => {
                    let a = parse_expr(tokens, pos, input)?;
                    Formula::implies(a, parse_expr(tokens, pos, input)?)
                }
                other => return Err(err(&format!("unknown operator `{other}`"))),
            };
            match tokens.get(*pos) {
                Some(&")") => {
                    *pos += 1;
                    Ok(f)
                }
                _ => Err(err("expected `)`")),
            }
        }
        ")" => Err(err("unexpected `)`")),
        id => Ok(Formula::Atom(id.to_string())),
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
