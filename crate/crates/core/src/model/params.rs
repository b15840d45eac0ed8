use std::collections::BTreeMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::datagen::StatementSet;
use crate::rng;

use super::vocab::{serialize_set, TokenizedSet, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    /// Embedding width.
    pub dim: usize,
    /// Hidden width.
    pub hidden: usize,
    /// Rows of the hashed within-statement token-pair table; 0 disables it.
    pub pair_buckets: usize,
    /// Half-width of the uniform embedding initialization.
    pub init_scale: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            dim: 64,
            hidden: 64,
            pair_buckets: 4096,
            init_scale: 0.1,
        }
    }
}

/// Sparse pooled input: `x = sum_w weight * emb[row] + sum_p weight * pair[row]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    pub words: Vec<(u32, f64)>,
    pub pairs: Vec<(u32, f64)>,
}

fn pair_bucket(a: u32, b: u32, buckets: usize) -> u32 {
    let key = ((a as u64) << 32) | b as u64;
    (rng::derive(key, &[]) % buckets as u64) as u32
}

fn normalized(counts: BTreeMap<u32, usize>) -> Vec<(u32, f64)> {
    let total: usize = counts.values().sum();
    counts
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect()
}

impl Features {
    /// Mean over all tokens (CLS included) plus mean over ordered token pairs
    /// that occur within one statement.
    pub fn of(t: &TokenizedSet, pair_buckets: usize) -> Self {
        let mut words = BTreeMap::new();
        for &tok in &t.tokens {
            *words.entry(tok).or_insert(0) += 1;
        }
        let mut pairs = BTreeMap::new();
        if pair_buckets > 0 {
            for seg in t.segments() {
                for (i, &a) in seg.iter().enumerate() {
                    for &b in &seg[i + 1..] {
                        *pairs.entry(pair_bucket(a, b, pair_buckets)).or_insert(0) += 1;
                    }
                }
            }
        }
        Features {
            words: normalized(words),
            pairs: normalized(pairs),
        }
    }
}

/// Activations kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Cache {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
}

/// All trainable weights in one flat vector, laid out as
/// embedding (|V| x d), hidden (d x h), hidden bias (h), energy head (h),
/// energy bias (1), class head (h x 2), class bias (2), pair table (P x d).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub vocab: Vocabulary,
    pub dim: usize,
    pub hidden: usize,
    pub pair_buckets: usize,
    pub init_seed: u64,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    emb: usize,
    w: usize,
    b: usize,
    v: usize,
    c: usize,
    u: usize,
    ub: usize,
    pair: usize,
    len: usize,
}

fn layout(vocab: usize, d: usize, h: usize, p: usize) -> Layout {
    let emb = 0;
    let w = emb + vocab * d;
    let b = w + d * h;
    let v = b + h;
    let c = v + h;
    let u = c + 1;
    let ub = u + 2 * h;
    let pair = ub + 2;
    Layout {
        emb,
        w,
        b,
        v,
        c,
        u,
        ub,
        pair,
        len: pair + p * d,
    }
}

pub fn param_count(vocab: usize, cfg: &ModelConfig) -> usize {
    layout(vocab, cfg.dim, cfg.hidden, cfg.pair_buckets).len
}

impl ModelParams {
    pub fn init(vocab: Vocabulary, cfg: &ModelConfig, seed: u64) -> Self {
        let (d, h) = (cfg.dim, cfg.hidden);
        let l = layout(vocab.len(), d, h, cfg.pair_buckets);
        let mut theta = vec![0.0; l.len];
        let mut r = rng::stream(seed, &[rng::tag("init")]);
        let mut fill = |range: std::ops::Range<usize>, s: f64| {
            if s <= 0.0 {
                return;
            }
            for x in &mut theta[range] {
                *x = r.gen_range(-s..s);
            }
        };
        fill(l.emb..l.w, cfg.init_scale);
        fill(l.w..l.b, (6.0 / (d + h) as f64).sqrt());
        fill(l.v..l.c, (6.0 / (h + 1) as f64).sqrt());
        fill(l.u..l.ub, (6.0 / (h + 2) as f64).sqrt());
        fill(l.pair..l.len, cfg.init_scale);
        ModelParams {
            vocab,
            dim: d,
            hidden: h,
            pair_buckets: cfg.pair_buckets,
            init_seed: seed,
            theta,
        }
    }

    /// All weights zero.
    pub fn zeros(vocab: Vocabulary, cfg: &ModelConfig) -> Self {
        let mut p = Self::init(vocab, cfg, 0);
        p.theta.iter_mut().for_each(|x| *x = 0.0);
        p
    }

    pub fn config(&self) -> ModelConfig {
        ModelConfig {
            dim: self.dim,
            hidden: self.hidden,
            pair_buckets: self.pair_buckets,
            init_scale: 0.0,
        }
    }

    fn layout(&self) -> Layout {
        layout(self.vocab.len(), self.dim, self.hidden, self.pair_buckets)
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.theta.iter().all(|x| x.is_finite())
    }

    pub fn tokenize(&self, s: &StatementSet, shuffle_seed: u64) -> TokenizedSet {
        serialize_set(&self.vocab, s, shuffle_seed)
    }

    pub fn features(&self, t: &TokenizedSet) -> Features {
        Features::of(t, self.pair_buckets)
    }

    /// Features of `s` in its stored order. The score does not depend on the
    /// order.
    pub fn features_of(&self, s: &StatementSet) -> Features {
        self.features(&self.tokenize(s, 0))
    }

    pub fn forward(&self, f: &Features) -> Cache {
        let (d, h) = (self.dim, self.hidden);
        let l = self.layout();
        let th = &self.theta;
        let mut x = vec![0.0; d];
        let mut add = |base: usize, rows: &[(u32, f64)]| {
            for &(r, wt) in rows {
                let row = &th[base + r as usize * d..base + (r as usize + 1) * d];
                for (xi, e) in x.iter_mut().zip(row) {
                    *xi += wt * e;
                }
            }
        };
        add(l.emb, &f.words);
        add(l.pair, &f.pairs);
        let mut z = th[l.b..l.b + h].to_vec();
        for (i, xi) in x.iter().enumerate() {
            let row = &th[l.w + i * h..l.w + (i + 1) * h];
            for (zj, wij) in z.iter_mut().zip(row) {
                *zj += xi * wij;
            }
        }
        let a = z.iter().map(|v| v.tanh()).collect();
        Cache { x, a }
    }

    pub fn energy_from(&self, c: &Cache) -> f64 {
        let l = self.layout();
        let v = &self.theta[l.v..l.c];
        c.a.iter().zip(v).map(|(a, v)| a * v).sum::<f64>() + self.theta[l.c]
    }

    pub fn logits_from(&self, c: &Cache) -> [f64; 2] {
        let l = self.layout();
        let mut out = [self.theta[l.ub], self.theta[l.ub + 1]];
        for (j, a) in c.a.iter().enumerate() {
            out[0] += a * self.theta[l.u + 2 * j];
            out[1] += a * self.theta[l.u + 2 * j + 1];
        }
        out
    }

    pub fn energy(&self, t: &TokenizedSet) -> f64 {
        self.energy_from(&self.forward(&self.features(t)))
    }

    pub fn energy_of(&self, s: &StatementSet) -> f64 {
        self.energy_from(&self.forward(&self.features_of(s)))
    }

    pub fn binary_logits(&self, t: &TokenizedSet) -> [f64; 2] {
        self.logits_from(&self.forward(&self.features(t)))
    }

    pub fn logits_of(&self, s: &StatementSet) -> [f64; 2] {
        self.logits_from(&self.forward(&self.features_of(s)))
    }

    /// Back-propagates `da` (gradient w.r.t. the hidden activations) into
    /// `grad`, scaled by `scale`.
    fn backward_hidden(&self, f: &Features, c: &Cache, da: &[f64], scale: f64, grad: &mut [f64]) {
        let (d, h) = (self.dim, self.hidden);
        let l = self.layout();
        let dz: Vec<f64> = da.iter().zip(&c.a).map(|(g, a)| scale * g * (1.0 - a * a)).collect();
        let mut dx = vec![0.0; d];
        for i in 0..d {
            let w = &self.theta[l.w + i * h..l.w + (i + 1) * h];
            let gw = &mut grad[l.w + i * h..l.w + (i + 1) * h];
            let xi = c.x[i];
            let mut acc = 0.0;
            for j in 0..h {
                gw[j] += xi * dz[j];
                acc += w[j] * dz[j];
            }
            dx[i] = acc;
        }
        for (gb, g) in grad[l.b..l.b + h].iter_mut().zip(&dz) {
            *gb += g;
        }
        let mut scatter = |base: usize, rows: &[(u32, f64)]| {
            for &(r, wt) in rows {
                let row = &mut grad[base + r as usize * d..base + (r as usize + 1) * d];
                for (g, dxi) in row.iter_mut().zip(&dx) {
                    *g += wt * dxi;
                }
            }
        };
        scatter(l.emb, &f.words);
        scatter(l.pair, &f.pairs);
    }

    /// Adds `scale * dE/dtheta` to `grad`.
    pub fn grad_energy(&self, f: &Features, c: &Cache, scale: f64, grad: &mut [f64]) {
        let l = self.layout();
        let h = self.hidden;
        for (g, a) in grad[l.v..l.c].iter_mut().zip(&c.a) {
            *g += scale * a;
        }
        grad[l.c] += scale;
        let v = self.theta[l.v..l.v + h].to_vec();
        self.backward_hidden(f, c, &v, scale, grad);
    }

    /// Adds `sum_k upstream[k] * d logit_k / dtheta` to `grad`.
    pub fn grad_logits(&self, f: &Features, c: &Cache, upstream: [f64; 2], grad: &mut [f64]) {
        let l = self.layout();
        let mut da = vec![0.0; self.hidden];
        for (j, a) in c.a.iter().enumerate() {
            grad[l.u + 2 * j] += a * upstream[0];
            grad[l.u + 2 * j + 1] += a * upstream[1];
            da[j] = self.theta[l.u + 2 * j] * upstream[0] + self.theta[l.u + 2 * j + 1] * upstream[1];
        }
        grad[l.ub] += upstream[0];
        grad[l.ub + 1] += upstream[1];
        self.backward_hidden(f, c, &da, 1.0, grad);
    }

    /// Index range of the embedding row of `token` inside `theta`.
    pub fn embedding_row(&self, token: u32) -> std::ops::Range<usize> {
        let start = self.layout().emb + token as usize * self.dim;
        start..start + self.dim
    }

    /// Index range of the energy head weights inside `theta`.
    pub fn energy_head(&self) -> std::ops::Range<usize> {
        let l = self.layout();
        l.v..l.c
    }
}

/// Softmax probability of the inconsistent class.
pub fn inconsistent_probability(logits: [f64; 2]) -> f64 {
    let m = logits[0].max(logits[1]);
    let (a, b) = ((logits[0] - m).exp(), (logits[1] - m).exp());
    b / (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::vocab::{tokenize, Vocabulary};

    fn tiny() -> (ModelParams, TokenizedSet) {
        let vocab = Vocabulary::from_tokens(tokenize("a b c d e the answer is yes no"));
        let cfg = ModelConfig {
            dim: 5,
            hidden: 4,
            pair_buckets: 7,
            init_scale: 0.5,
        };
        let p = ModelParams::init(vocab, &cfg, 3);
        let ids = |s: &str| tokenize(s).iter().map(|t| p.vocab.id(t)).collect::<Vec<_>>();
        let mut tokens = vec![0];
        let mut offsets = vec![1];
        for s in ["a b c", "d e yes", "a no"] {
            tokens.extend(ids(s));
            offsets.push(tokens.len());
        }
        (p, TokenizedSet { tokens, offsets })
    }

    #[test]
    fn zero_params_give_bias_and_uniform_softmax() {
        let (p, t) = tiny();
        let mut z = ModelParams::zeros(p.vocab.clone(), &p.config());
        assert_eq!(z.energy(&t), 0.0);
        let c = z.layout().c;
        z.theta[c] = 0.7;
        assert_eq!(z.energy(&t), 0.7);
        assert_eq!(inconsistent_probability(z.binary_logits(&t)), 0.5);
    }

    #[test]
    fn segment_order_does_not_matter() {
        let (p, t) = tiny();
        let swapped = TokenizedSet {
            tokens: [&t.tokens[..1], &t.tokens[4..7], &t.tokens[1..4], &t.tokens[7..]].concat(),
            offsets: vec![1, 4, 7, 9],
        };
        assert!((p.energy(&t) - p.energy(&swapped)).abs() < 1e-12);
    }

    #[test]
    fn absent_token_gets_no_gradient() {
        let (p, t) = tiny();
        let f = p.features(&t);
        let c = p.forward(&f);
        let mut g = vec![0.0; p.len()];
        p.grad_energy(&f, &c, 1.0, &mut g);
        let absent = p.vocab.id("the");
        assert!(g[p.embedding_row(absent)].iter().all(|&x| x == 0.0));
        // head gradient equals the hidden activations
        assert_eq!(&g[p.energy_head()], &c.a[..]);
    }

    #[test]
    fn analytic_matches_central_differences() {
        let (mut p, t) = tiny();
        let f = p.features(&t);
        let c = p.forward(&f);
        let mut ge = vec![0.0; p.len()];
        p.grad_energy(&f, &c, 1.0, &mut ge);
        let mut gl = vec![0.0; p.len()];
        p.grad_logits(&f, &c, [0.3, -1.1], &mut gl);
        let step = 1e-4;
        for k in 0..p.len() {
            let orig = p.theta[k];
            p.theta[k] = orig + step;
            let (ep, lp) = (p.energy(&t), p.binary_logits(&t));
            p.theta[k] = orig - step;
            let (em, lm) = (p.energy(&t), p.binary_logits(&t));
            p.theta[k] = orig;
            let ne = (ep - em) / (2.0 * step);
            let nl = (0.3 * (lp[0] - lm[0]) - 1.1 * (lp[1] - lm[1])) / (2.0 * step);
            assert!((ne - ge[k]).abs() <= 1e-6 * (1.0 + ne.abs()), "energy {k}: {ne} vs {}", ge[k]);
            assert!((nl - gl[k]).abs() <= 1e-6 * (1.0 + nl.abs()), "logits {k}: {nl} vs {}", gl[k]);
        }
    }
}
