//! Adapts a QA-trained model to the sentence corpus by mixing N source and
//! N target pairs per epoch under an L2 pull towards the starting weights.
//!
//!     cargo run --release --example fine_tune

use setcoh::datagen::{build_splits, partition, SplitConfig, Style};
use setcoh::evalkit::{build_eval_mixture, evaluate_set_level};
use setcoh::trainer::{fine_tune, init_params, learn_threshold, energy_scores, train, ThresholdSource, TrainerConfig, L2Anchor};
use setcoh::verifier::EnergyScorer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut qa = SplitConfig::new(Style::Qa);
    qa.train = (300, 300);
    let source = build_splits(&qa, 1)?;
    let target = build_splits(&SplitConfig::uniform(Style::Snli, 200), 2)?;
    let cfg = TrainerConfig { epochs: 8, learning_rate: 1e-2, ..Default::default() };
    let base = train(init_params(&source, &cfg), &source, &cfg)?;

    let tuned_cfg = TrainerConfig { l2_anchor: L2Anchor::Initial, epochs: 5, ..cfg };
    let tuned = fine_tune(&base.params, &source.train, &target.train, 150, &tuned_cfg)?;

    for (name, split) in [("qa", &source), ("snli", &target)] {
        let (c, i) = partition(&split.test);
        let mixture = build_eval_mixture(&c, &i, 40, 3)?;
        for (tag, params) in [("before", &base.params), ("after", &tuned)] {
            let val = setcoh::trainer::validation_mixture(&split.validation1, 8)?;
            let threshold = learn_threshold(&energy_scores(params, &val), ThresholdSource::Energy)?;
            let scorer = EnergyScorer { params: params.clone(), threshold };
            println!("{name:<5} {tag:<7} macro-F1 {:.3}", evaluate_set_level(&scorer, &mixture)?.macro_f1);
        }
    }
    Ok(())
}
