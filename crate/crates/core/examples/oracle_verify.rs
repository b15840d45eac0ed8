//! Set-level and element-wise verification with the exact oracle. SN-3 is
//! inconsistent only as a whole: each of its pairs is satisfiable. SE-28 has
//! the same shape, but the entailment axiom already breaks one of its pairs.

use setcoh::datagen::{apply_rule, gen_seed_pair, Relation};
use setcoh::model::statement_text;
use setcoh::verifier::{pair_ratio, verify_elementwise, verify_set, GradedOracleScorer, OracleScorer, Scorer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let entail = gen_seed_pair(11, Relation::Entailment);
    let neutral = gen_seed_pair(11, Relation::Neutral);
    for (rule, seed) in [("SE-5", &entail), ("SE-26", &entail), ("SE-28", &entail), ("SN-3", &neutral)] {
        let s = apply_rule(rule, std::slice::from_ref(seed), rule)?;
        println!("{rule} (gold {}):", s.label);
        for st in &s.statements {
            println!("  {}", statement_text(st));
        }
        let set = verify_set(&OracleScorer, &s)?;
        let pairs = pair_ratio(&OracleScorer, &s)?;
        let elem = verify_elementwise(&OracleScorer, &s, 0.0)?;
        println!("  set-level: {}", set.label);
        println!("  element-wise (mtr 0): {} ({} of {} pairs unsatisfiable)", elem.label, pairs.inconsistent_pairs, pairs.pairs);
        println!("  graded oracle score: {:.3}", GradedOracleScorer.score(&s)?);
    }
    Ok(())
}
