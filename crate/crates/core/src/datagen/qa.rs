//! Question-answer sets about one attribute of one object.
//!
//! Atom `{ns}.{object}.{attribute}.{value}` reads "the object has this value".
//! The axioms say that at most one of the mentioned values holds.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::logic::{inconsistency_degree, negate, Formula};
use crate::rng;

use super::lexicon::{ATTRIBUTES, OBJECTS};
use super::types::{Difficulty, Label, Provenance, QaWorld, Statement, StatementSet};
use super::{check_label, DataError};

/// Draws an object, an attribute, a true value and 2 to `max_distractors`
/// distinct distractors.
pub fn gen_qa_world(rng_seed: u64, max_distractors: usize) -> QaWorld {
    let mut rng = rng::stream(rng_seed, &[rng::tag("qa-world")]);
    let object = *OBJECTS.choose(&mut rng).unwrap();
    let attr = ATTRIBUTES.choose(&mut rng).unwrap();
    let k = rng.gen_range(2..=max_distractors.clamp(2, attr.values.len() - 1));
    let mut values: Vec<&str> = attr.values.choose_multiple(&mut rng, k + 1).copied().collect();
    let true_value = values.remove(0).to_string();
    QaWorld {
        object: object.to_string(),
        attribute_type: attr.name.to_string(),
        true_value,
        distractor_values: values.into_iter().map(String::from).collect(),
    }
}

fn value_atom(ns: &str, world: &QaWorld, value: &str) -> Formula {
    Formula::atom(format!("{ns}.{}.{}.{value}", world.object, world.attribute_type))
}

fn exclusion_axioms(ns: &str, world: &QaWorld) -> Vec<Formula> {
    let values: Vec<&str> = std::iter::once(world.true_value.as_str())
        .chain(world.distractor_values.iter().map(String::as_str))
        .collect();
    let mut out = Vec::new();
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            out.push(Formula::or(
                Formula::not(value_atom(ns, world, a)),
                Formula::not(value_atom(ns, world, b)),
            ));
        }
    }
    out
}

/// The consistent set: the open question, the affirmation and one "no" per
/// distractor, in that order.
pub fn gen_qa_set(world: &QaWorld, set_id: &str) -> Result<StatementSet, DataError> {
    world.check()?;
    let attr = super::lexicon::attribute(&world.attribute_type)
        .ok_or_else(|| DataError::Invalid(format!("unknown attribute `{}`", world.attribute_type)))?;
    let obj = world.object.as_str();
    let yes_no = |val: &str| attr.yes_no_question.replace("{obj}", obj).replace("{val}", val);
    let t = world.true_value.as_str();

    let mut statements = vec![
        Statement::qa(
            attr.open_question.replace("{obj}", obj),
            t,
            Some(value_atom(set_id, world, t)),
        ),
        Statement::qa(yes_no(t), "yes", Some(value_atom(set_id, world, t))),
    ];
    for d in &world.distractor_values {
        statements.push(Statement::qa(
            yes_no(d),
            "no",
            Some(Formula::not(value_atom(set_id, world, d))),
        ));
    }
    let set = StatementSet {
        id: set_id.to_string(),
        statements,
        label: Label::Consistent,
        provenance: Provenance::C,
        rule_id: Some("QA-GEN".into()),
        difficulty: Difficulty::Medium,
        gold_inconsistent_indices: None,
        axioms: exclusion_axioms(set_id, world),
    };
    check_label(&set)?;
    Ok(set)
}

/// Indices whose removal alone makes the set (with its axioms) satisfiable.
pub fn restoring_indices(s: &StatementSet) -> Result<Vec<usize>, DataError> {
    let fs = s.formulas()?;
    let ax: Vec<&Formula> = s.axioms.iter().collect();
    let mut out = Vec::new();
    for i in 0..fs.len() {
        let rest: Vec<&Formula> = fs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| *f).collect();
        if inconsistency_degree(&rest, &ax)? == Some(0) {
            out.push(i);
        }
    }
    Ok(out)
}

fn value_of(f: &Formula) -> Option<&str> {
    match f {
        Formula::Atom(id) => id.rsplit('.').next(),
        Formula::Not(inner) => value_of(inner),
        _ => None,
    }
}

/// Flips the answer of one statement of a consistent QA set, producing an
/// inconsistent set named `set_id` whose atoms live in that namespace.
///
/// Yes/no answers are toggled; the open answer is replaced by a value that a
/// "no" question asks about. For sets of four or more statements only flips
/// whose undoing is the unique way to restore consistency are eligible.
pub fn corrupt_qa(sc: &StatementSet, rng_seed: u64, set_id: &str) -> Result<StatementSet, DataError> {
    if sc.label != Label::Consistent || !sc.is_qa() {
        return Err(DataError::Invalid(format!(
            "corrupt_qa needs a consistent QA set, `{}` is not",
            sc.id
        )));
    }
    let mut base = sc.clone();
    base.rename_namespace(&sc.id, set_id);
    base.id = set_id.to_string();

    let asked: Vec<(String, Formula)> = base
        .statements
        .iter()
        .filter_map(|s| match s {
            Statement::Qa {
                answer,
                semantics: Some(f),
                ..
            } if answer == "no" => Some((value_of(f)?.to_string(), negate(f))),
            _ => None,
        })
        .collect();

    let mut candidates: Vec<(usize, String, Formula, Difficulty)> = Vec::new();
    for (i, s) in base.statements.iter().enumerate() {
        let Statement::Qa {
            answer,
            semantics: Some(f),
            ..
        } = s
        else {
            return Err(DataError::MissingSemantics {
                set: sc.id.clone(),
                index: i,
            });
        };
        match answer.as_str() {
            "yes" => candidates.push((i, "no".into(), negate(f), Difficulty::Easy)),
            "no" => candidates.push((i, "yes".into(), negate(f), Difficulty::Medium)),
            _ => {
                for (value, atom) in &asked {
                    candidates.push((i, value.clone(), atom.clone(), Difficulty::Medium));
                }
            }
        }
    }

    let mut eligible = Vec::new();
    for (i, answer, f, difficulty) in candidates {
        let mut out = base.clone();
        if let Statement::Qa {
            answer: a,
            semantics,
            ..
        } = &mut out.statements[i]
        {
            *a = answer;
            *semantics = Some(f);
        }
        out.label = Label::Inconsistent;
        out.provenance = Provenance::I;
        out.rule_id = Some("QA-FLIP".into());
        out.difficulty = difficulty;
        out.gold_inconsistent_indices = Some(vec![i]);
        if super::oracle_consistent(&out)? {
            continue;
        }
        if out.len() >= 4 && restoring_indices(&out)? != [i] {
            continue;
        }
        eligible.push(out);
    }
    let mut rng = rng::stream(rng_seed, &[rng::tag("qa-flip")]);
    let pick = eligible
        .choose(&mut rng)
        .ok_or_else(|| DataError::Invalid(format!("no eligible flip for `{}`", sc.id)))?
        .clone();
    check_label(&pick)?;
    Ok(pick)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> QaWorld {
        QaWorld {
            object: "desk".into(),
            attribute_type: "color".into(),
            true_value: "brown".into(),
            distractor_values: vec!["pink".into()],
        }
    }

    fn pairs(s: &StatementSet) -> Vec<(String, String)> {
        s.statements
            .iter()
            .map(|st| match st {
                Statement::Qa { question, answer, .. } => (question.clone(), answer.clone()),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn desk_example() {
        let s = gen_qa_set(&desk(), "q").unwrap();
        let expected = [
            ("what color is desk?", "brown"),
            ("is desk brown?", "yes"),
            ("is desk pink?", "no"),
        ];
        let got = pairs(&s);
        assert_eq!(got.len(), 3);
        for (g, e) in got.iter().zip(expected) {
            assert_eq!((g.0.as_str(), g.1.as_str()), e);
        }
        assert!(super::super::oracle_consistent(&s).unwrap());
    }

    #[test]
    fn size_is_distractors_plus_two() {
        for seed in 0..50 {
            let w = gen_qa_world(seed, 4);
            w.check().unwrap();
            assert_eq!(gen_qa_set(&w, "q").unwrap().len(), w.distractor_values.len() + 2);
        }
    }

    #[test]
    fn corruption_keeps_questions_and_size() {
        for seed in 0..100 {
            let w = gen_qa_world(seed, 4);
            let c = gen_qa_set(&w, "c").unwrap();
            let i = corrupt_qa(&c, seed, "i").unwrap();
            assert_eq!(i.len(), c.len());
            assert_eq!(i.label, Label::Inconsistent);
            let gold = i.gold_inconsistent_indices.clone().unwrap();
            assert_eq!(gold.len(), 1);
            let (pc, pi) = (pairs(&c), pairs(&i));
            let changed: Vec<usize> = (0..c.len()).filter(|&k| pc[k] != pi[k]).collect();
            assert_eq!(changed, gold);
            assert!(pc.iter().zip(&pi).all(|(a, b)| a.0 == b.0));
            if i.len() >= 4 {
                assert_eq!(restoring_indices(&i).unwrap(), gold);
            }
            assert!(i.atoms().iter().all(|a| a.starts_with("i.")));
        }
    }

    #[test]
    fn flip_no_to_yes() {
        // with a single distractor the candidates are few; find the pink flip
        let c = gen_qa_set(&desk(), "c").unwrap();
        let found = (0..64).map(|s| corrupt_qa(&c, s, "i").unwrap()).any(|i| {
            pairs(&i)[2] == ("is desk pink?".to_string(), "yes".to_string())
        });
        assert!(found);
    }
}
