use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::datagen::{compose_mixture, partition, DatasetSplit, Label, Provenance, StatementSet};
use crate::model::{inconsistent_probability, ModelParams, Vocabulary};
use crate::rng;

use super::contrast::{build_contrast_batch, contrasts_for_pair, hinge_loss, Contrast, Regime};
use super::optim::Optimizer;
use super::threshold::{learn_threshold, Threshold, ThresholdSource};
use super::{L2Anchor, TrainError, TrainerConfig};

/// Classes scored on validation1 when picking thresholds.
pub const VALIDATION_CLASSES: [Provenance; 5] =
    [Provenance::C, Provenance::CC, Provenance::I, Provenance::CI, Provenance::II];

#[derive(Debug, Clone, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    pub mean_loss: f64,
    pub val1_macro_acc: f64,
    pub threshold: f64,
    pub medians: BTreeMap<Provenance, f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub threshold: Threshold,
    pub best_epoch: usize,
    pub log: Vec<EpochLog>,
}

/// Vocabulary from the training split and freshly initialized weights.
pub fn init_params(split: &DatasetSplit, cfg: &TrainerConfig) -> ModelParams {
    let vocab = Vocabulary::build(&split.train);
    ModelParams::init(vocab, &cfg.model, rng::derive(cfg.rng_seed, &[rng::tag("init")]))
}

/// The validation1 mixture of C, CC, I, CI and II sets, one per base pair
/// and class.
pub fn validation_mixture(sets: &[StatementSet], rng_seed: u64) -> Result<Vec<StatementSet>, TrainError> {
    let (c, i) = partition(sets);
    let per_class = c.len().min(i.len());
    Ok(compose_mixture(&c, &i, &VALIDATION_CLASSES, per_class, rng_seed, "val")?)
}

pub fn energy_scores(params: &ModelParams, sets: &[StatementSet]) -> Vec<(f64, Label)> {
    sets.iter().map(|s| (params.energy_of(s), s.label)).collect()
}

pub fn softmax_scores(params: &ModelParams, sets: &[StatementSet]) -> Vec<(f64, Label)> {
    sets.iter()
        .map(|s| (inconsistent_probability(params.logits_of(s)), s.label))
        .collect()
}

pub fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Median score per provenance class.
pub fn medians_by_class(sets: &[StatementSet], scores: &[(f64, Label)]) -> BTreeMap<Provenance, f64> {
    let mut by: BTreeMap<Provenance, Vec<f64>> = BTreeMap::new();
    for (s, (e, _)) in sets.iter().zip(scores) {
        by.entry(s.provenance).or_default().push(*e);
    }
    by.into_iter().map(|(k, mut v)| (k, median(&mut v))).collect()
}

fn check_finite(x: f64, epoch: usize, step: usize, what: &str) -> Result<(), TrainError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(TrainError::Divergence {
            epoch,
            step,
            detail: format!("{what} is {x}"),
        })
    }
}

fn l2_penalty(theta: &[f64], anchor: Option<&[f64]>, weight: f64, grad: Option<&mut [f64]>) -> f64 {
    if weight == 0.0 {
        return 0.0;
    }
    let diff = |k: usize| theta[k] - anchor.map_or(0.0, |a| a[k]);
    if let Some(g) = grad {
        for (k, gk) in g.iter_mut().enumerate() {
            *gk += 2.0 * weight * diff(k);
        }
    }
    weight * (0..theta.len()).map(|k| diff(k).powi(2)).sum::<f64>()
}

/// One pass of hinge-loss steps over `contrasts`; returns the mean loss.
fn hinge_epoch(
    params: &mut ModelParams,
    opt: &mut Optimizer,
    contrasts: &[Contrast],
    cfg: &TrainerConfig,
    l2: Option<(&[f64], f64)>,
    epoch: usize,
    rng: &mut rng::Rng,
) -> Result<f64, TrainError> {
    let mut grad = vec![0.0; params.len()];
    let mut total = 0.0;
    for (step, batch) in contrasts.chunks(cfg.batch_size.max(1)).enumerate() {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let scale = 1.0 / batch.len() as f64;
        for c in batch {
            let fm = params.features(&params.tokenize(&c.more, rng.gen()));
            let fl = params.features(&params.tokenize(&c.less, rng.gen()));
            let (cm, cl) = (params.forward(&fm), params.forward(&fl));
            let loss = hinge_loss(params.energy_from(&cm), params.energy_from(&cl), cfg.alpha);
            check_finite(loss, epoch, step, "hinge loss")?;
            total += loss;
            if loss > 0.0 {
                params.grad_energy(&fm, &cm, scale, &mut grad);
                params.grad_energy(&fl, &cl, -scale, &mut grad);
            }
        }
        if let Some((anchor, weight)) = l2 {
            let anchor = (cfg.l2_anchor == L2Anchor::Initial).then_some(anchor);
            l2_penalty(&params.theta, anchor, weight, Some(&mut grad));
        }
        opt.step(&mut params.theta, &grad);
        if !params.is_finite() {
            return Err(TrainError::Divergence {
                epoch,
                step,
                detail: "non-finite parameters".into(),
            });
        }
    }
    Ok(total / contrasts.len().max(1) as f64)
}

fn mean_hinge(params: &ModelParams, contrasts: &[Contrast], alpha: f64) -> f64 {
    let sum: f64 = contrasts
        .iter()
        .map(|c| hinge_loss(params.energy_of(&c.more), params.energy_of(&c.less), alpha))
        .sum();
    sum / contrasts.len().max(1) as f64
}

/// Contrastive training of the energy head.
///
/// After every epoch a threshold is learned on the validation1 mixture; the
/// parameters of the epoch with the best validation1 macro accuracy are
/// returned (earliest epoch on ties). Row 0 of the log describes the
/// untrained parameters.
pub fn train(params: ModelParams, split: &DatasetSplit, cfg: &TrainerConfig) -> Result<TrainOutcome, TrainError> {
    cfg.check()?;
    let (pool_c, pool_i) = partition(&split.train);
    let val = validation_mixture(&split.validation1, rng::derive(cfg.rng_seed, &[rng::tag("val1")]))?;
    let mut params = params;
    let mut opt = Optimizer::new(cfg.optimizer, cfg.learning_rate, params.len());
    let mut log = Vec::with_capacity(cfg.epochs + 1);

    let evaluate = |p: &ModelParams, epoch: usize, loss: f64| -> Result<(EpochLog, Threshold), TrainError> {
        let scores = energy_scores(p, &val);
        let mut t = learn_threshold(&scores, ThresholdSource::Energy)?;
        t.learned_epoch = Some(epoch);
        let row = EpochLog {
            epoch,
            mean_loss: loss,
            val1_macro_acc: t.macro_accuracy,
            threshold: t.value,
            medians: medians_by_class(&val, &scores),
        };
        Ok((row, t))
    };

    let contrasts_for = |epoch: usize| -> Result<Vec<Contrast>, TrainError> {
        let seed = rng::derive(cfg.rng_seed, &[rng::tag("epoch"), epoch as u64]);
        let mut cs = build_contrast_batch(&pool_c, &pool_i, cfg.regime, seed)?;
        cs.shuffle(&mut rng::stream(seed, &[rng::tag("batch-order")]));
        Ok(cs)
    };

    let first = contrasts_for(1)?;
    let (row, mut best_t) = evaluate(&params, 0, mean_hinge(&params, &first, cfg.alpha))?;
    log.push(row);
    let mut best = (params.clone(), 0usize);
    for epoch in 1..=cfg.epochs {
        let contrasts = if epoch == 1 { first.clone() } else { contrasts_for(epoch)? };
        let mut r = rng::stream(cfg.rng_seed, &[rng::tag("shuffle"), epoch as u64]);
        let loss = hinge_epoch(&mut params, &mut opt, &contrasts, cfg, None, epoch, &mut r)?;
        let (row, t) = evaluate(&params, epoch, loss)?;
        if t.macro_accuracy > best_t.macro_accuracy {
            best = (params.clone(), epoch);
            best_t = t;
        }
        log.push(row);
    }
    Ok(TrainOutcome {
        params: best.0,
        threshold: best_t,
        best_epoch: best.1,
        log,
    })
}

/// Cross-entropy training of the two-way head on C and CC (consistent) versus
/// I, CI and II (inconsistent) sets. The threshold is learned on the softmax
/// probability of the inconsistent class.
pub fn train_binary(
    params: ModelParams,
    split: &DatasetSplit,
    cfg: &TrainerConfig,
) -> Result<TrainOutcome, TrainError> {
    cfg.check()?;
    let (pool_c, pool_i) = partition(&split.train);
    let val = validation_mixture(&split.validation1, rng::derive(cfg.rng_seed, &[rng::tag("val1")]))?;
    let mut params = params;
    let mut opt = Optimizer::new(cfg.optimizer, cfg.learning_rate, params.len());
    let mut log = Vec::with_capacity(cfg.epochs + 1);

    let evaluate = |p: &ModelParams, epoch: usize, loss: f64| -> Result<(EpochLog, Threshold), TrainError> {
        let scores = softmax_scores(p, &val);
        let mut t = learn_threshold(&scores, ThresholdSource::InconsistentSoftmax)?;
        t.learned_epoch = Some(epoch);
        let row = EpochLog {
            epoch,
            mean_loss: loss,
            val1_macro_acc: t.macro_accuracy,
            threshold: t.value,
            medians: medians_by_class(&val, &scores),
        };
        Ok((row, t))
    };

    let (row, mut best_t) = evaluate(&params, 0, std::f64::consts::LN_2)?;
    log.push(row);
    let mut best = (params.clone(), 0usize);
    let n = pool_c.len().min(pool_i.len());
    let mut grad = vec![0.0; params.len()];
    for epoch in 1..=cfg.epochs {
        let seed = rng::derive(cfg.rng_seed, &[rng::tag("epoch"), epoch as u64]);
        let mut examples: Vec<StatementSet> = Vec::with_capacity(n * 5);
        for k in 0..n {
            let mut r = rng::stream(seed, &[rng::tag("contrast"), k as u64]);
            let cs = contrasts_for_pair(pool_c[k], pool_i[k], &pool_c, &pool_i, Regime::Eight, &mut r)?;
            examples.push(cs[0].more.clone()); // C
            examples.push(cs[0].less.clone()); // I
            examples.push(cs[3].more.clone()); // CC
            examples.push(cs[1].less.clone()); // CI
            examples.push(cs[2].less.clone()); // II
        }
        let mut r = rng::stream(seed, &[rng::tag("batch-order")]);
        examples.shuffle(&mut r);
        let mut total = 0.0;
        for (step, batch) in examples.chunks(cfg.batch_size.max(1)).enumerate() {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            for s in batch {
                let f = params.features(&params.tokenize(s, r.gen()));
                let c = params.forward(&f);
                let p1 = inconsistent_probability(params.logits_from(&c));
                let y1 = if s.label.is_consistent() { 0.0 } else { 1.0 };
                let loss = -(if y1 == 1.0 { p1 } else { 1.0 - p1 }).max(1e-300).ln();
                check_finite(loss, epoch, step, "cross-entropy")?;
                total += loss;
                // d loss / d logits = softmax - onehot
                let g1 = p1 - y1;
                params.grad_logits(&f, &c, [-g1 * scale, g1 * scale], &mut grad);
            }
            opt.step(&mut params.theta, &grad);
            if !params.is_finite() {
                return Err(TrainError::Divergence {
                    epoch,
                    step,
                    detail: "non-finite parameters".into(),
                });
            }
        }
        let (row, t) = evaluate(&params, epoch, total / examples.len().max(1) as f64)?;
        if t.macro_accuracy > best_t.macro_accuracy {
            best = (params.clone(), epoch);
            best_t = t;
        }
        log.push(row);
    }
    Ok(TrainOutcome {
        params: best.0,
        threshold: best_t,
        best_epoch: best.1,
        log,
    })
}

/// Appends rows for tokens of `sets` missing from the vocabulary, keeping
/// existing ids and weights.
pub fn extend_vocabulary(params: &ModelParams, sets: &[StatementSet], rng_seed: u64) -> ModelParams {
    let fresh = Vocabulary::build(sets);
    let new: Vec<String> = fresh
        .tokens()
        .iter()
        .filter(|t| params.vocab.id(t) == crate::model::UNK_ID && t.as_str() != crate::model::UNK)
        .cloned()
        .collect();
    if new.is_empty() {
        return params.clone();
    }
    let vocab = params.vocab.extended(&new);
    let mut cfg = params.config();
    cfg.init_scale = 0.0;
    let mut out = ModelParams::init(vocab, &cfg, params.init_seed);
    let d = params.dim;
    let old_rows = params.vocab.len() * d;
    out.theta[..old_rows].copy_from_slice(&params.theta[..old_rows]);
    let added = new.len() * d;
    let mut r = rng::stream(rng_seed, &[rng::tag("extend-vocab")]);
    for x in &mut out.theta[old_rows..old_rows + added] {
        *x = r.gen_range(-0.1..0.1);
    }
    out.theta[old_rows + added..].copy_from_slice(&params.theta[old_rows..]);
    out
}

/// Continues contrastive training on `n` source and `n` target base pairs per
/// epoch (re-sampled every epoch) with an L2 penalty of `cfg.l2_weight`.
pub fn fine_tune(
    source_params: &ModelParams,
    source: &[StatementSet],
    target: &[StatementSet],
    n: usize,
    cfg: &TrainerConfig,
) -> Result<ModelParams, TrainError> {
    cfg.check()?;
    let (sc, si) = partition(source);
    let (tc, ti) = partition(target);
    let cap = sc.len().min(si.len()).min(tc.len()).min(ti.len());
    if n == 0 || n > cap {
        return Err(TrainError::PoolExhausted(format!("n = {n} but the smallest pool has {cap} pairs")));
    }
    let mut params = extend_vocabulary(source_params, target, cfg.rng_seed);
    let anchor = params.theta.clone();
    let mut opt = Optimizer::new(cfg.optimizer, cfg.learning_rate, params.len());
    for epoch in 1..=cfg.epochs {
        let seed = rng::derive(cfg.rng_seed, &[rng::tag("fine-tune"), epoch as u64]);
        let mut r = rng::stream(seed, &[]);
        let mut contrasts = Vec::with_capacity(2 * n * cfg.regime.kinds().len());
        for (pc, pi) in [(&sc, &si), (&tc, &ti)] {
            let mut idx: Vec<usize> = (0..pc.len().min(pi.len())).collect();
            idx.shuffle(&mut r);
            for &k in &idx[..n] {
                contrasts.extend(contrasts_for_pair(pc[k], pi[k], pc, pi, cfg.regime, &mut r)?);
            }
        }
        contrasts.shuffle(&mut r);
        hinge_epoch(&mut params, &mut opt, &contrasts, cfg, Some((&anchor, cfg.l2_weight)), epoch, &mut r)?;
    }
    Ok(params)
}

/// Training log as CSV: epoch, mean_hinge_loss, val1_macro_acc, threshold,
/// then one median column per validation class.
pub fn write_log_csv<W: Write>(w: W, log: &[EpochLog]) -> Result<(), TrainError> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![
        "epoch".to_string(),
        "mean_hinge_loss".into(),
        "val1_macro_acc".into(),
        "threshold".into(),
    ];
    header.extend(VALIDATION_CLASSES.iter().map(|c| format!("median_{c}")));
    out.write_record(&header)?;
    for row in log {
        let mut rec = vec![
            row.epoch.to_string(),
            format!("{:.9}", row.mean_loss),
            format!("{:.6}", row.val1_macro_acc),
            format!("{:.9}", row.threshold),
        ];
        rec.extend(
            VALIDATION_CLASSES
                .iter()
                .map(|c| row.medians.get(c).map_or(String::new(), |m| format!("{m:.9}"))),
        );
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
