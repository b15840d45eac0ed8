use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use crate::rng;

use super::types::{Difficulty, Provenance, StatementSet};
use super::DataError;

/// Topics a set talks about in the surface text, independent of namespace.
///
/// For QA sets this is `object.attribute`: two parts about the colour of the
/// same desk would read as contradicting each other even though their atoms
/// are disjoint, so samplers keep such parts apart. Sentence sets report no
/// topics.
pub fn surface_keys(s: &StatementSet) -> BTreeSet<String> {
    if !s.is_qa() {
        return BTreeSet::new();
    }
    s.atoms()
        .into_iter()
        .filter_map(|a| {
            let rest = a.split_once('.')?.1;
            Some(rest.rsplit_once('.')?.0.to_string())
        })
        .collect()
}

/// Parts may be merged: pairwise disjoint atoms and surface topics.
pub fn compatible(parts: &[&StatementSet]) -> bool {
    let mut atoms = BTreeSet::new();
    let mut keys = BTreeSet::new();
    parts.iter().all(|p| {
        p.atoms().into_iter().all(|a| atoms.insert(a.to_string()))
            && surface_keys(p).into_iter().all(|k| keys.insert(k))
    })
}

/// Concatenates 2 to 4 sets and shuffles the statements.
///
/// The provenance tags add up, the label follows from the provenance and gold
/// indices are carried over to their shuffled positions.
pub fn compose_union(id: &str, parts: &[&StatementSet], shuffle_seed: u64) -> Result<StatementSet, DataError> {
    if !(2..=4).contains(&parts.len()) {
        return Err(DataError::Invalid(format!("union takes 2 to 4 parts, got {}", parts.len())));
    }
    let mut seen = BTreeSet::new();
    for p in parts {
        for a in p.atoms() {
            if !seen.insert(a) {
                return Err(DataError::NamespaceCollision(a.to_string()));
            }
        }
    }

    let mut statements = Vec::new();
    let mut gold_flags = Vec::new();
    let mut has_gold = false;
    let mut provenance = Provenance::new(0, 0);
    let mut axioms = Vec::new();
    let mut rule_ids = Vec::new();
    let mut difficulty = Difficulty::Medium;
    for p in parts {
        let gold: BTreeSet<usize> = match &p.gold_inconsistent_indices {
            Some(g) => {
                has_gold = true;
                g.iter().copied().collect()
            }
            None => BTreeSet::new(),
        };
        for (i, s) in p.statements.iter().enumerate() {
            statements.push(s.clone());
            gold_flags.push(gold.contains(&i));
        }
        provenance = provenance.merge(p.provenance);
        axioms.extend(p.axioms.iter().cloned());
        rule_ids.push(p.rule_id.clone().unwrap_or_else(|| "?".into()));
        if p.difficulty == Difficulty::Easy {
            difficulty = Difficulty::Easy;
        }
    }

    let mut order: Vec<usize> = (0..statements.len()).collect();
    order.shuffle(&mut rng::stream(shuffle_seed, &[rng::tag("union")]));
    let gold: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|&(_, &src)| gold_flags[src])
        .map(|(dst, _)| dst)
        .collect();

    let set = StatementSet {
        id: id.to_string(),
        statements: order.iter().map(|&i| statements[i].clone()).collect(),
        label: provenance.label(),
        provenance,
        rule_id: Some(rule_ids.join("+")),
        difficulty,
        gold_inconsistent_indices: has_gold.then_some(gold),
        axioms,
    };
    set.check()?;
    Ok(set)
}

/// Draws `parts` members (C's first, then I's) from the pools so that they
/// are pairwise compatible and each is compatible with every set in `avoid`
/// (the `avoid` sets need not be compatible with one another).
pub fn draw_parts<'a>(
    pool_c: &[&'a StatementSet],
    pool_i: &[&'a StatementSet],
    class: Provenance,
    avoid: &[&StatementSet],
    rng: &mut rng::Rng,
) -> Result<Vec<&'a StatementSet>, DataError> {
    const TRIES: usize = 200;
    if (class.consistent > 0 && pool_c.len() < class.consistent) || (class.inconsistent > 0 && pool_i.len() < class.inconsistent) {
        return Err(DataError::PoolExhausted(format!("pools too small for class {class}")));
    }
    for _ in 0..TRIES {
        let mut parts: Vec<&StatementSet> = Vec::with_capacity(class.parts());
        parts.extend(pool_c.choose_multiple(rng, class.consistent).copied());
        parts.extend(pool_i.choose_multiple(rng, class.inconsistent).copied());
        let clear = parts.iter().all(|p| avoid.iter().all(|a| compatible(&[a, p])));
        if clear && compatible(&parts) {
            return Ok(parts);
        }
    }
    Err(DataError::PoolExhausted(format!("no compatible parts for class {class} after {TRIES} draws")))
}

/// `per_class` sets for every class in `classes`, built from the base pools.
/// Single-part classes take a base set as is; larger classes are unions of
/// distinct, compatible base sets. Ids are `{prefix}-{class}-{k:05}`.
pub fn compose_mixture(
    pool_c: &[&StatementSet],
    pool_i: &[&StatementSet],
    classes: &[Provenance],
    per_class: usize,
    rng_seed: u64,
    prefix: &str,
) -> Result<Vec<StatementSet>, DataError> {
    let mut out = Vec::with_capacity(classes.len() * per_class);
    for &class in classes {
        for k in 0..per_class {
            let mut r = rng::stream(rng_seed, &[rng::tag("mixture"), rng::tag(&class.to_string()), k as u64]);
            let parts = draw_parts(pool_c, pool_i, class, &[], &mut r)?;
            let id = format!("{prefix}-{class}-{k:05}");
            let set = if parts.len() == 1 {
                let mut s = parts[0].clone();
                s.id = id;
                s.rename_namespace(&parts[0].id, &s.id.clone());
                s
            } else {
                compose_union(&id, &parts, rand::Rng::gen(&mut r))?
            };
            out.push(set);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{apply_rule, corrupt_qa, gen_qa_set, gen_seed_pair, validate_with_oracle, Label, QaWorld, Relation};

    fn rule(id: &str, seed: u64, ns: &str) -> StatementSet {
        apply_rule(id, &[gen_seed_pair(seed, Relation::Entailment)], ns).unwrap()
    }

    #[test]
    fn provenance_and_label() {
        let c = rule("SE-6", 1, "a");
        let c2 = rule("SE-1", 2, "b");
        let i = rule("SE-28", 3, "c");
        let ci = compose_union("u", &[&c, &i], 9).unwrap();
        assert_eq!(ci.provenance.to_string(), "CI");
        assert_eq!(ci.label, Label::Inconsistent);
        assert!(validate_with_oracle(&ci).unwrap());
        let cc = compose_union("v", &[&c, &c2], 9).unwrap();
        assert_eq!(cc.provenance.to_string(), "CC");
        assert_eq!(cc.label, Label::Consistent);
        assert!(validate_with_oracle(&cc).unwrap());
        assert_eq!(cc.len(), c.len() + c2.len());
        let ic = compose_union("w", &[&i, &c, &c2], 1).unwrap();
        assert_eq!(ic.provenance.to_string(), "CCI");
    }

    #[test]
    fn collision_detected() {
        let c = rule("SE-6", 1, "a");
        let c2 = rule("SE-1", 2, "a");
        assert!(matches!(compose_union("u", &[&c, &c2], 0), Err(DataError::NamespaceCollision(_))));
    }

    #[test]
    fn gold_follows_the_shuffle() {
        let w = QaWorld {
            object: "desk".into(),
            attribute_type: "color".into(),
            true_value: "brown".into(),
            distractor_values: vec!["pink".into(), "red".into()],
        };
        let c = gen_qa_set(&w, "c").unwrap();
        let i = corrupt_qa(&c, 4, "i").unwrap();
        let g = i.gold_inconsistent_indices.as_ref().unwrap()[0];
        let other = QaWorld {
            object: "car".into(),
            ..w.clone()
        };
        let c2 = gen_qa_set(&other, "d").unwrap();
        for seed in 0..10 {
            let u = compose_union("u", &[&c2, &i], seed).unwrap();
            let ug = u.gold_inconsistent_indices.clone().unwrap();
            assert_eq!(ug.len(), 1);
            assert_eq!(u.statements[ug[0]], i.statements[g]);
        }
        // same topic, different namespaces: compatible() refuses
        assert!(!compatible(&[&c, &i]));
        assert!(compatible(&[&c2, &i]));
    }
}
