use crate::datagen::{compose_mixture, Provenance, StatementSet};

use super::EvalError;

/// The 14 provenance classes of up to four merged base sets.
pub fn eval_classes() -> Vec<Provenance> {
    Provenance::classes(4)
}

/// `per_class` sets of each of the 14 classes, ids `eval-{class}-{k}`.
pub fn build_eval_mixture(
    pool_c: &[&StatementSet],
    pool_i: &[&StatementSet],
    per_class: usize,
    rng_seed: u64,
) -> Result<Vec<StatementSet>, EvalError> {
    Ok(compose_mixture(pool_c, pool_i, &eval_classes(), per_class, rng_seed, "eval")?)
}

/// Classes with exactly one inconsistent part (I, CI, CCI, CCCI), so every
/// set has a single gold element when the base sets do.
pub fn locate_classes() -> Vec<Provenance> {
    (0..4).map(|c| Provenance::new(c, 1)).collect()
}

/// `per_class` sets of each single-inconsistency class, ids `locate-{class}-{k}`.
pub fn build_locate_mixture(
    pool_c: &[&StatementSet],
    pool_i: &[&StatementSet],
    per_class: usize,
    rng_seed: u64,
) -> Result<Vec<StatementSet>, EvalError> {
    Ok(compose_mixture(pool_c, pool_i, &locate_classes(), per_class, rng_seed, "locate")?)
}
