//! Exact satisfiability by truth-table enumeration.
//!
//! Formulas are compiled to postfix programs over local variable indices and
//! evaluated 64 valuations at a time as bit-parallel truth tables. Formulas
//! that share no atoms are split into independent components first, so a union
//! of sets over disjoint namespaces costs the sum of its parts rather than the
//! product.

use std::collections::BTreeMap;

use super::{Formula, LogicError, Valuation};

/// Upper bound on distinct atoms across one oracle query.
pub const MAX_ATOMS: usize = 24;

#[derive(Debug, Clone, Copy)]
enum Op {
    Var(usize),
    Not,
    Or,
    Implies,
}

struct Program(Vec<Op>);

impl Program {
    fn compile(f: &Formula, index: &BTreeMap<&str, usize>) -> Program {
        fn go(f: &Formula, index: &BTreeMap<&str, usize>, out: &mut Vec<Op>) {
            match f {
                Formula::Atom(id) => out.push(Op::Var(index[id.as_str()])),
                Formula::Not(g) => {
                    go(g, index, out);
                    out.push(Op::Not);
                }
                Formula::Or(a, b) => {
                    go(a, index, out);
                    go(b, index, out);
                    out.push(Op::Or);
                }
                Formula::Implies(a, b) => {
                    go(a, index, out);
                    go(b, index, out);
                    out.push(Op::Implies);
                }
            }
        }
        let mut ops = Vec::new();
        go(f, index, &mut ops);
        Program(ops)
    }

    /// Truth table of the formula over the 64 valuations of `chunk`.
    fn eval(&self, columns: &[u64], stack: &mut Vec<u64>) -> u64 {
        stack.clear();
        for op in &self.0 {
            match *op {
                Op::Var(i) => stack.push(columns[i]),
                Op::Not => {
                    let a = stack.pop().unwrap();
                    stack.push(!a);
                }
                Op::Or | Op::Implies => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(if matches!(op, Op::Or) { a | b } else { !a | b });
                }
            }
        }
        stack.pop().unwrap()
    }
}

/// Bit pattern of variable `i` over rows `64*chunk .. 64*chunk+64`, where row
/// `r` assigns variable `i` the bit `(r >> i) & 1`.
fn column(i: usize, chunk: u64) -> u64 {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if i < 6 {
        LOW[i]
    } else if (chunk >> (i - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

fn row_mask(vars: usize) -> u64 {
    if vars >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << vars)) - 1
    }
}

/// A group of formulas closed under shared atoms.
struct Component {
    vars: Vec<String>,
    statements: Vec<Program>,
    background: Vec<Program>,
}

impl Component {
    fn chunks(&self) -> u64 {
        if self.vars.len() <= 6 {
            1
        } else {
            1u64 << (self.vars.len() - 6)
        }
    }

    fn for_each_chunk(&self, mut visit: impl FnMut(u64, &[u64], &[u64], u64) -> bool) {
        let n = self.vars.len();
        let mask = row_mask(n);
        let mut stack = Vec::new();
        let mut cols = vec![0u64; n];
        let mut stmt = vec![0u64; self.statements.len()];
        for chunk in 0..self.chunks() {
            for (i, c) in cols.iter_mut().enumerate() {
                *c = column(i, chunk);
            }
            let mut bg = mask;
            for p in &self.background {
                bg &= p.eval(&cols, &mut stack);
            }
            for (t, p) in stmt.iter_mut().zip(&self.statements) {
                *t = p.eval(&cols, &mut stack);
            }
            if !visit(chunk, &cols, &stmt, bg) {
                return;
            }
        }
    }

    fn satisfying_row(&self) -> Option<(u64, u32)> {
        let mut found = None;
        self.for_each_chunk(|chunk, _, stmt, bg| {
            let all = stmt.iter().fold(bg, |acc, t| acc & t);
            if all != 0 {
                found = Some((chunk, all.trailing_zeros()));
                false
            } else {
                true
            }
        });
        found
    }

    /// Fewest statements falsified by any valuation that satisfies the background.
    fn min_falsified(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        self.for_each_chunk(|_, _, stmt, bg| {
            let mut rows = bg;
            while rows != 0 {
                let r = rows.trailing_zeros();
                rows &= rows - 1;
                let falsified = stmt.iter().filter(|t| (**t >> r) & 1 == 0).count();
                if best.is_none_or(|b| falsified < b) {
                    best = Some(falsified);
                }
            }
            best != Some(0)
        });
        best
    }
}

fn components(statements: &[&Formula], background: &[&Formula]) -> Result<Vec<Component>, LogicError> {
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for f in statements.iter().chain(background) {
        for a in f.atoms() {
            let next = index.len();
            index.entry(a).or_insert(next);
        }
    }
    if index.len() > MAX_ATOMS {
        return Err(LogicError::AtomBudgetExceeded(index.len()));
    }

    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for f in statements.iter().chain(background) {
        let ids: Vec<usize> = f.atoms().into_iter().map(|a| index[a]).collect();
        for w in ids.windows(2) {
            let (ra, rb) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[ra] = rb;
        }
    }

    let mut by_root: BTreeMap<usize, (Vec<&Formula>, Vec<&Formula>)> = BTreeMap::new();
    let root_of = |f: &Formula, parent: &mut [usize]| {
        let first = f.atoms().into_iter().next().expect("formula without atoms");
        find(parent, index[first])
    };
    for f in statements {
        let r = root_of(f, &mut parent);
        by_root.entry(r).or_default().0.push(f);
    }
    for f in background {
        let r = root_of(f, &mut parent);
        by_root.entry(r).or_default().1.push(f);
    }

    Ok(by_root
        .into_values()
        .map(|(stmts, bg)| {
            let mut local: BTreeMap<&str, usize> = BTreeMap::new();
            for f in stmts.iter().chain(&bg) {
                for a in f.atoms() {
                    let next = local.len();
                    local.entry(a).or_insert(next);
                }
            }
            let mut vars = vec![String::new(); local.len()];
            for (name, &i) in &local {
                vars[i] = name.to_string();
            }
            Component {
                statements: stmts.iter().map(|f| Program::compile(f, &local)).collect(),
                background: bg.iter().map(|f| Program::compile(f, &local)).collect(),
                vars,
            }
        })
        .collect())
}

/// True iff one valuation over the union of atoms makes every formula true.
/// The empty collection is satisfiable.
pub fn is_satisfiable<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Result<bool, LogicError> {
    Ok(find_model(fs)?.is_some())
}

/// A satisfying valuation, if one exists.
pub fn find_model<'a>(
    fs: impl IntoIterator<Item = &'a Formula>,
) -> Result<Option<Valuation>, LogicError> {
    let fs: Vec<&Formula> = fs.into_iter().collect();
    let mut model = Valuation::new();
    for comp in components(&fs, &[])? {
        let Some((chunk, row)) = comp.satisfying_row() else {
            return Ok(None);
        };
        for (i, name) in comp.vars.iter().enumerate() {
            let bit = (column(i, chunk) >> row) & 1 == 1;
            model.0.insert(name.clone(), bit);
        }
    }
    Ok(Some(model))
}

/// Joint satisfiability of `statements` together with always-on `background`
/// formulas (world knowledge such as an entailment axiom).
pub fn is_satisfiable_with(statements: &[&Formula], background: &[&Formula]) -> Result<bool, LogicError> {
    Ok(inconsistency_degree(statements, background)? == Some(0))
}

/// Minimum number of statements that must be dropped for the remainder to be
/// satisfiable together with `background`. `None` when the background alone
/// is unsatisfiable. Zero exactly when the whole collection is satisfiable.
pub fn inconsistency_degree(
    statements: &[&Formula],
    background: &[&Formula],
) -> Result<Option<usize>, LogicError> {
    let mut total = 0;
    for comp in components(statements, background)? {
        match comp.min_falsified() {
            Some(k) => total += k,
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

#[cfg(test)]
mod tests {
    use super::super::evaluate;
    use super::*;

    fn a(id: &str) -> Formula {
        Formula::atom(id)
    }

    #[test]
    fn train_example_is_unsatisfiable() {
        let fs = [Formula::or(a("p"), a("q")), Formula::not(a("p")), Formula::not(a("q"))];
        assert!(!is_satisfiable(&fs).unwrap());
    }

    #[test]
    fn modus_tollens_set_is_satisfiable() {
        let fs = [
            Formula::implies(a("p"), a("h")),
            Formula::not(a("h")),
            Formula::not(a("p")),
        ];
        assert!(is_satisfiable(&fs).unwrap());
    }

    #[test]
    fn empty_collection_is_satisfiable() {
        assert!(is_satisfiable(std::iter::empty()).unwrap());
        assert_eq!(inconsistency_degree(&[], &[]).unwrap(), Some(0));
    }

    #[test]
    fn atom_budget() {
        let many: Vec<Formula> = (0..25).map(|i| a(&format!("x{i}"))).collect();
        match is_satisfiable(&many) {
            Err(LogicError::AtomBudgetExceeded(n)) => assert_eq!(n, 25),
            other => panic!("unexpected {other:?}"),
        }
        assert!(is_satisfiable(&many[..24]).unwrap());
    }

    #[test]
    fn wide_single_component_uses_chunks() {
        // x0 -> x1 -> ... -> x11, x0, not x11: unsatisfiable across 12 variables.
        let mut fs: Vec<Formula> = (0..11)
            .map(|i| Formula::implies(a(&format!("x{i}")), a(&format!("x{}", i + 1))))
            .collect();
        fs.push(a("x0"));
        assert!(is_satisfiable(&fs).unwrap());
        let model = find_model(&fs).unwrap().unwrap();
        assert!(fs.iter().all(|f| evaluate(f, &model).unwrap()));
        fs.push(Formula::not(a("x11")));
        assert!(!is_satisfiable(&fs).unwrap());
    }

    #[test]
    fn background_axioms_participate() {
        let p = a("p");
        let not_h = Formula::not(a("h"));
        let axiom = Formula::implies(a("p"), a("h"));
        assert!(is_satisfiable_with(&[&p, &not_h], &[]).unwrap());
        assert!(!is_satisfiable_with(&[&p, &not_h], &[&axiom]).unwrap());
    }

    #[test]
    fn degree_counts_independent_conflicts() {
        let p = a("p");
        let np = Formula::not(a("p"));
        let q = a("q");
        let nq = Formula::not(a("q"));
        let r = a("r");
        assert_eq!(inconsistency_degree(&[&p, &np, &q, &nq, &r], &[]).unwrap(), Some(2));
        assert_eq!(inconsistency_degree(&[&p, &q], &[]).unwrap(), Some(0));
        let bad = [Formula::not(a("z")), a("z")];
        assert_eq!(inconsistency_degree(&[&p], &[&bad[0], &bad[1]]).unwrap(), None);
    }
}
