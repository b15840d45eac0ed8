//! Trains one model per contrast regime and prints validation2 energy
//! quartiles per provenance class.
//!
//!     cargo run --release --example regime_ablation

use setcoh::datagen::{build_splits, SplitConfig, Style};
use setcoh::evalkit::ablation_report;
use setcoh::trainer::{Regime, TrainerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sc = SplitConfig::new(Style::Qa);
    sc.train = (300, 300);
    let split = build_splits(&sc, 4)?;
    let cfg = TrainerConfig { epochs: 8, learning_rate: 1e-2, ..Default::default() };
    for row in ablation_report(&split, &[Regime::Basic, Regime::Six, Regime::Eight], &cfg, 50)? {
        println!("{} (macro-F1 {:.3}, ordered {})", row.regime, row.macro_f1, row.ordered());
        for (class, q) in &row.quartiles {
            println!("  {class:<3} {:+.3} [{:+.3}, {:+.3}]", q.median, q.q1, q.q3);
        }
    }
    Ok(())
}
