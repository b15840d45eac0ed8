//! The two-class baseline: same encoder, softmax head, threshold on the
//! inconsistent-class probability.
//!
//!     cargo run --release --example train_binary -- [pairs] [epochs]

use setcoh::datagen::{build_splits, partition, SplitConfig, Style};
use setcoh::evalkit::{build_eval_mixture, evaluate_set_level};
use setcoh::trainer::{init_params, train_binary, TrainerConfig};
use setcoh::verifier::SoftmaxScorer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>());
    let pairs = args.next().transpose()?.unwrap_or(400);
    let epochs = args.next().transpose()?.unwrap_or(10);

    let mut sc = SplitConfig::new(Style::Qa);
    sc.train = (pairs, pairs);
    let split = build_splits(&sc, 1)?;
    let cfg = TrainerConfig { epochs, learning_rate: 1e-2, ..Default::default() };
    let out = train_binary(init_params(&split, &cfg), &split, &cfg)?;
    println!("best epoch {}, P(inconsistent) threshold {:.4}", out.best_epoch, out.threshold.value);

    let (c, i) = partition(&split.test);
    let mixture = build_eval_mixture(&c, &i, 100, 5)?;
    let scorer = SoftmaxScorer { params: out.params, threshold: out.threshold };
    let r = evaluate_set_level(&scorer, &mixture)?;
    println!("test mixture macro-F1 {:.3}", r.macro_f1);
    Ok(())
}
