//! Round trip through the score-file format: any outside system that writes
//! `threshold=<t>` followed by `set_id,score` rows can be verified and
//! compared like a built-in scorer.

use setcoh::datagen::{build_splits, partition, SplitConfig, Style};
use setcoh::evalkit::{build_eval_mixture, evaluate_set_level};
use setcoh::verifier::{ExternalScorer, GradedOracleScorer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let split = build_splits(&SplitConfig::uniform(Style::Snli, 40), 6)?;
    let (c, i) = partition(&split.test);
    let mixture = build_eval_mixture(&c, &i, 10, 1)?;

    let mut buf = Vec::new();
    ExternalScorer::write(&mut buf, &GradedOracleScorer, &mixture)?;
    let text = String::from_utf8(buf)?;
    for line in text.lines().take(4) {
        println!("{line}");
    }
    let external = ExternalScorer::from_reader(text.as_bytes())?;
    let r = evaluate_set_level(&external, &mixture)?;
    println!("graded oracle read from file: macro-F1 {:.3} over {} sets", r.macro_f1, r.count);
    Ok(())
}
