use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::rng;

use super::qa::{corrupt_qa, gen_qa_set, gen_qa_world};
use super::rules::{apply_rule, rules_in, RuleFamily};
use super::seeds::gen_seed_pair;
use super::types::{DatasetSplit, Label, SeedPair, StatementSet};
use super::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    /// Sentence sets from the rule tables.
    Snli,
    /// Question-answer sets.
    Qa,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Snli => "snli",
            Style::Qa => "qa",
        })
    }
}

impl FromStr for Style {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "snli" => Ok(Style::Snli),
            "qa" => Ok(Style::Qa),
            _ => Err(DataError::Invalid(format!("unknown style `{s}` (expected snli or qa)"))),
        }
    }
}

/// Per-split (consistent, inconsistent) counts and the rule families to draw from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub style: Style,
    pub train: (usize, usize),
    pub validation1: (usize, usize),
    pub validation2: (usize, usize),
    pub test: (usize, usize),
    pub families: Vec<RuleFamily>,
    /// Upper bound on distractors per QA world (set size is this plus two).
    pub max_distractors: usize,
}

impl SplitConfig {
    pub fn new(style: Style) -> Self {
        SplitConfig {
            style,
            train: (2000, 2000),
            validation1: (200, 200),
            validation2: (200, 200),
            test: (200, 200),
            families: RuleFamily::ALL.to_vec(),
            max_distractors: 4,
        }
    }

    /// Same counts for every split (train included).
    pub fn uniform(style: Style, per_label: usize) -> Self {
        let n = (per_label, per_label);
        SplitConfig {
            train: n,
            validation1: n,
            validation2: n,
            test: n,
            ..Self::new(style)
        }
    }

    pub fn counts(&self) -> [(&'static str, (usize, usize)); 4] {
        [
            ("train", self.train),
            ("validation1", self.validation1),
            ("validation2", self.validation2),
            ("test", self.test),
        ]
    }
}

impl Serialize for RuleFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.prefix())
    }
}

impl<'de> Deserialize<'de> for RuleFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        RuleFamily::ALL
            .into_iter()
            .find(|f| f.prefix() == s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown rule family `{s}`")))
    }
}

fn set_id(style: Style, split: &str, label: Label, idx: usize) -> String {
    let l = if label.is_consistent() { 'c' } else { 'i' };
    format!("{style}-{split}-{l}-{idx:05}")
}

/// Sentence item `idx`: an inconsistent rule drawn uniformly from the allowed
/// families and a consistent rule of the same family, both applied to the
/// same seed pairs. Consistent and inconsistent sets with equal index thus
/// share their surface vocabulary and differ in logical form.
fn snli_item(
    cfg: &SplitConfig,
    seed: u64,
    split: &str,
    idx: usize,
) -> Result<(StatementSet, StatementSet), DataError> {
    let mut rng = rng::stream(seed, &[rng::tag("snli"), rng::tag(split), idx as u64]);
    let inc: Vec<_> = cfg
        .families
        .iter()
        .flat_map(|&f| rules_in(f, Label::Inconsistent))
        .collect();
    let i_rule = *inc
        .choose(&mut rng)
        .ok_or_else(|| DataError::InsufficientRuleCoverage("inconsistent sets".into()))?;
    let con: Vec<_> = rules_in(i_rule.family, Label::Consistent).collect();
    let c_rule = *con
        .choose(&mut rng)
        .ok_or_else(|| DataError::InsufficientRuleCoverage(format!("consistent {} sets", i_rule.family)))?;
    let seeds: Vec<SeedPair> = (0..i_rule.family.seed_count())
        .map(|k| {
            let s = rng::derive(seed, &[rng::tag("snli-seed"), rng::tag(split), idx as u64, k as u64]);
            gen_seed_pair(s, i_rule.family.relation())
        })
        .collect();
    let c = apply_rule(&c_rule.id(), &seeds, &set_id(cfg.style, split, Label::Consistent, idx))?;
    let i = apply_rule(&i_rule.id(), &seeds, &set_id(cfg.style, split, Label::Inconsistent, idx))?;
    Ok((c, i))
}

/// QA item `idx`: a consistent set and a corruption of it.
fn qa_item(cfg: &SplitConfig, seed: u64, split: &str, idx: usize) -> Result<(StatementSet, StatementSet), DataError> {
    let world = gen_qa_world(rng::derive(seed, &[rng::tag("qa"), rng::tag(split), idx as u64]), cfg.max_distractors);
    let c = gen_qa_set(&world, &set_id(cfg.style, split, Label::Consistent, idx))?;
    let flip_seed = rng::derive(seed, &[rng::tag("qa-flip"), rng::tag(split), idx as u64]);
    let i = corrupt_qa(&c, flip_seed, &set_id(cfg.style, split, Label::Inconsistent, idx))?;
    Ok((c, i))
}

/// Builds the four splits. Every item draws from its own seed stream, so the
/// result depends only on `(config, rng_seed)`.
pub fn build_splits(cfg: &SplitConfig, rng_seed: u64) -> Result<DatasetSplit, DataError> {
    if cfg.style == Style::Snli {
        for label in [Label::Consistent, Label::Inconsistent] {
            if cfg.families.iter().all(|&f| rules_in(f, label).next().is_none()) {
                return Err(DataError::InsufficientRuleCoverage(format!(
                    "{label} sets from families {:?}",
                    cfg.families
                )));
            }
        }
    }
    let mut out = DatasetSplit::default();
    for (name, (nc, ni)) in cfg.counts() {
        if nc == 0 || ni == 0 {
            return Err(DataError::Invalid(format!("split {name} needs at least one set per label")));
        }
        let mut cs = Vec::with_capacity(nc);
        let mut is = Vec::with_capacity(ni);
        for idx in 0..nc.max(ni) {
            let (c, i) = match cfg.style {
                Style::Snli => snli_item(cfg, rng_seed, name, idx)?,
                Style::Qa => qa_item(cfg, rng_seed, name, idx)?,
            };
            if idx < nc {
                cs.push(c);
            }
            if idx < ni {
                is.push(i);
            }
        }
        cs.append(&mut is);
        match name {
            "train" => out.train = cs,
            "validation1" => out.validation1 = cs,
            "validation2" => out.validation2 = cs,
            _ => out.test = cs,
        }
    }
    Ok(out)
}

/// Set-size histogram (size → count).
pub fn size_histogram<'a>(sets: impl IntoIterator<Item = &'a StatementSet>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for s in sets {
        *h.entry(s.len()).or_default() += 1;
    }
    h
}
