//! Element-wise verification across mismatch-tolerance ratios, by number of
//! composed parts, against the set-level oracle.

use setcoh::datagen::{build_splits, partition, SplitConfig, Style};
use setcoh::evalkit::{best_mtr, build_eval_mixture, evaluate_set_level, mtr_grid, mtr_sweep};
use setcoh::verifier::OracleScorer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let split = build_splits(&SplitConfig::uniform(Style::Snli, 60), 2)?;
    let (c, i) = partition(&split.test);
    let mixture = build_eval_mixture(&c, &i, 40, 9)?;
    let grid = mtr_grid(10);
    for row in mtr_sweep(&OracleScorer, &mixture, &grid)? {
        let parts = row.components.map_or("all".to_string(), |p| p.to_string());
        println!("mtr {:.2}  parts {parts:>3}  macro-F1 {:.3}", row.mtr, row.macro_f1);
    }
    let (m, f1) = best_mtr(&OracleScorer, &mixture, &grid)?;
    println!("best element-wise: mtr {m:.2}, macro-F1 {f1:.3}");
    println!("set-level: macro-F1 {:.3}", evaluate_set_level(&OracleScorer, &mixture)?.macro_f1);
    Ok(())
}
