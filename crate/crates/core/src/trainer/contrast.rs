use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::datagen::{compose_union, draw_parts, Provenance, StatementSet};
use crate::rng;

use super::TrainError;

/// Ordered comparison (more consistent, less consistent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContrastKind {
    CvsI,
    CvsCI,
    CvsII,
    CCvsI,
    CCvsCI,
    CCvsII,
    CIvsI,
    IvsII,
}

impl ContrastKind {
    pub const ALL: [ContrastKind; 8] = [
        ContrastKind::CvsI,
        ContrastKind::CvsCI,
        ContrastKind::CvsII,
        ContrastKind::CCvsI,
        ContrastKind::CCvsCI,
        ContrastKind::CCvsII,
        ContrastKind::CIvsI,
        ContrastKind::IvsII,
    ];

    pub fn sides(self) -> (Provenance, Provenance) {
        use ContrastKind::*;
        match self {
            CvsI => (Provenance::C, Provenance::I),
            CvsCI => (Provenance::C, Provenance::CI),
            CvsII => (Provenance::C, Provenance::II),
            CCvsI => (Provenance::CC, Provenance::I),
            CCvsCI => (Provenance::CC, Provenance::CI),
            CCvsII => (Provenance::CC, Provenance::II),
            CIvsI => (Provenance::CI, Provenance::I),
            IvsII => (Provenance::I, Provenance::II),
        }
    }
}

impl fmt::Display for ContrastKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.sides();
        write!(f, "({a},{b})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Basic,
    Six,
    Eight,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Basic, Regime::Six, Regime::Eight];

    pub fn kinds(self) -> &'static [ContrastKind] {
        match self {
            Regime::Basic => &ContrastKind::ALL[..1],
            Regime::Six => &ContrastKind::ALL[..6],
            Regime::Eight => &ContrastKind::ALL[..],
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Basic => "basic",
            Regime::Six => "six",
            Regime::Eight => "eight",
        })
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(Regime::Basic),
            "six" => Ok(Regime::Six),
            "eight" => Ok(Regime::Eight),
            _ => Err(format!("unknown regime `{s}` (expected basic, six or eight)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Contrast {
    pub more: StatementSet,
    pub less: StatementSet,
    pub kind: ContrastKind,
}

/// Hinge loss `max(e_more - e_less + alpha, 0)`.
pub fn hinge_loss(e_more: f64, e_less: f64, alpha: f64) -> f64 {
    (e_more - e_less + alpha).max(0.0)
}

/// One instance per kind in `regime` around the base pair `(c, i)`.
///
/// A fresh consistent partner `C'` and inconsistent partner `I'` are drawn
/// and the unions are `CC = C + C'`, `CI = C' + I` and `II = I + I'`.
pub fn contrasts_for_pair(
    c: &StatementSet,
    i: &StatementSet,
    pool_c: &[&StatementSet],
    pool_i: &[&StatementSet],
    regime: Regime,
    rng: &mut rng::Rng,
) -> Result<Vec<Contrast>, TrainError> {
    let kinds = regime.kinds();
    let mut out = Vec::with_capacity(kinds.len());
    if kinds == [ContrastKind::CvsI] {
        out.push(Contrast {
            more: c.clone(),
            less: i.clone(),
            kind: ContrastKind::CvsI,
        });
        return Ok(out);
    }
    let c2 = draw_parts(pool_c, &[], Provenance::C, &[c, i], rng)?[0];
    let i2 = draw_parts(&[], pool_i, Provenance::I, &[c, i, c2], rng)?[0];
    let cc = compose_union(&format!("{}+{}", c.id, c2.id), &[c, c2], rng.gen())?;
    let ci = compose_union(&format!("{}+{}", c2.id, i.id), &[c2, i], rng.gen())?;
    let ii = compose_union(&format!("{}+{}", i.id, i2.id), &[i, i2], rng.gen())?;
    let pick = |p: Provenance| match (p.consistent, p.inconsistent) {
        (1, 0) => c,
        (0, 1) => i,
        (2, 0) => &cc,
        (1, 1) => &ci,
        _ => &ii,
    };
    for &kind in kinds {
        let (m, l) = kind.sides();
        out.push(Contrast {
            more: pick(m).clone(),
            less: pick(l).clone(),
            kind,
        });
    }
    Ok(out)
}

/// Pairs the `k`-th consistent with the `k`-th inconsistent base set, in a
/// seed-dependent order, and expands each pair into its contrasts.
pub fn build_contrast_batch(
    pool_c: &[&StatementSet],
    pool_i: &[&StatementSet],
    regime: Regime,
    rng_seed: u64,
) -> Result<Vec<Contrast>, TrainError> {
    if pool_c.is_empty() || pool_i.is_empty() {
        return Err(TrainError::PoolExhausted("empty base pool".into()));
    }
    let n = pool_c.len().min(pool_i.len());
    let mut order: Vec<usize> = (0..n).collect();
    let mut r = rng::stream(rng_seed, &[rng::tag("contrast-order")]);
    order.shuffle(&mut r);
    let mut out = Vec::with_capacity(n * regime.kinds().len());
    for k in order {
        let mut pr = rng::stream(rng_seed, &[rng::tag("contrast"), k as u64]);
        out.extend(contrasts_for_pair(pool_c[k], pool_i[k], pool_c, pool_i, regime, &mut pr)?);
    }
    Ok(out)
}
