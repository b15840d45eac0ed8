//! Builds small SNLI-style and QA splits, prints their size profile and
//! writes them as JSONL.
//!
//!     cargo run --example generate_corpus -- [out_dir]

use setcoh::datagen::{build_splits, partition, save_splits, size_histogram, validate_with_oracle, SplitConfig, Style};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    for style in [Style::Snli, Style::Qa] {
        let split = build_splits(&SplitConfig::uniform(style, 100), 7)?;
        println!("{style}:");
        for (name, sets) in split.parts() {
            let (c, i) = partition(sets);
            println!("  {name:<12} {} consistent, {} inconsistent, sizes {:?}", c.len(), i.len(), size_histogram(sets.iter()));
        }
        let checked = split.all().map(validate_with_oracle).collect::<Result<Vec<_>, _>>()?;
        println!("  oracle agrees with {} of {} labels", checked.iter().filter(|ok| **ok).count(), checked.len());
        let sample = &split.test[0];
        println!("  sample {} ({}):", sample.id, sample.label);
        for s in &sample.statements {
            println!("    {}", setcoh::model::statement_text(s));
        }
        if let Some(dir) = &out {
            save_splits(dir.join(style.to_string()), &split)?;
        }
    }
    Ok(())
}
