//! Greedy localization of the corrupted answer in a QA set, with the full
//! leave-one-out trace.

use setcoh::datagen::{corrupt_qa, gen_qa_set, gen_qa_world};
use setcoh::model::statement_text;
use setcoh::verifier::{locate, OracleScorer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let world = gen_qa_world(3, 4);
    let clean = gen_qa_set(&world, "clean")?;
    let broken = corrupt_qa(&clean, 3, "broken")?;
    for (k, s) in broken.statements.iter().enumerate() {
        println!("[{k}] {}", statement_text(s));
    }
    let r = locate(&OracleScorer, &broken)?;
    for (n, step) in r.trace.iter().enumerate() {
        let loo: Vec<String> = step.leave_one_out.iter().map(|(i, e)| format!("-{i}:{e:.0}")).collect();
        println!("step {n}: set score {:.0}, leave-one-out {}", step.set_score, loo.join(" "));
    }
    println!("removed {:?}, gold {:?}, stopped: {:?}", r.removed_indices, broken.gold_inconsistent_indices, r.terminal);
    Ok(())
}
