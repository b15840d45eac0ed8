//! The two-statement training corpus used by pairwise checkers.

use setcoh::datagen::{corrupt_qa, derive_pairwise_dataset, gen_qa_set, gen_qa_world, gen_seed_pair, Relation};
use setcoh::model::statement_text;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seeds: Vec<_> = (0..3).map(|k| gen_seed_pair(k, Relation::Entailment)).collect();
    let clean = gen_qa_set(&gen_qa_world(5, 3), "q")?;
    let broken = corrupt_qa(&clean, 5, "qi")?;
    for s in derive_pairwise_dataset(&seeds, &[clean, broken], 0)? {
        let text: Vec<String> = s.statements.iter().map(statement_text).collect();
        println!("{:<12} {}", s.label.to_string(), text.join(" | "));
    }
    Ok(())
}
