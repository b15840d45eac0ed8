//! Trains the set-level energy model on a small QA corpus and scores it on
//! the 14-class test mixture.
//!
//!     cargo run --release --example train_energy -- [pairs] [epochs]

use setcoh::datagen::{build_splits, partition, SplitConfig, Style};
use setcoh::evalkit::{build_eval_mixture, evaluate_set_level};
use setcoh::trainer::{init_params, train, TrainerConfig};
use setcoh::verifier::EnergyScorer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>());
    let pairs = args.next().transpose()?.unwrap_or(400);
    let epochs = args.next().transpose()?.unwrap_or(10);

    let mut sc = SplitConfig::new(Style::Qa);
    sc.train = (pairs, pairs);
    let split = build_splits(&sc, 1)?;
    let cfg = TrainerConfig { epochs, learning_rate: 1e-2, ..Default::default() };
    let out = train(init_params(&split, &cfg), &split, &cfg)?;
    for e in &out.log {
        println!("epoch {:>3}  loss {:.4}  val1 macro-acc {:.3}", e.epoch, e.mean_loss, e.val1_macro_acc);
    }
    println!("best epoch {} threshold {:.4}", out.best_epoch, out.threshold.value);

    let (c, i) = partition(&split.test);
    let mixture = build_eval_mixture(&c, &i, 100, 5)?;
    let scorer = EnergyScorer { params: out.params, threshold: out.threshold };
    let r = evaluate_set_level(&scorer, &mixture)?;
    println!("test mixture macro-F1 {:.3} (consistent {:.3}, inconsistent {:.3})", r.macro_f1, r.consistent.f1, r.inconsistent.f1);
    Ok(())
}
