use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::types::{DatasetSplit, StatementSet};
use super::DataError;

/// One compact JSON object per line, LF-terminated.
pub fn write_jsonl<W: Write>(mut w: W, sets: &[StatementSet]) -> Result<(), DataError> {
    for s in sets {
        serde_json::to_writer(&mut w, s).map_err(|e| DataError::Invalid(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Parses and structurally checks every non-blank line. Errors carry the
/// 1-based line number.
pub fn read_jsonl<R: Read>(r: R) -> Result<Vec<StatementSet>, DataError> {
    let mut out = Vec::new();
    for (n, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| DataError::MalformedRecord { line: n + 1, reason };
        let set: StatementSet = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        set.check().map_err(|e| malformed(e.to_string()))?;
        out.push(set);
    }
    Ok(out)
}

pub fn save_jsonl(path: impl AsRef<Path>, sets: &[StatementSet]) -> Result<(), DataError> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    write_jsonl(&mut w, sets)?;
    w.flush()?;
    Ok(())
}

pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Vec<StatementSet>, DataError> {
    read_jsonl(File::open(path)?)
}

/// Writes `<dir>/<split>/data.jsonl` for the four splits.
pub fn save_splits(dir: impl AsRef<Path>, split: &DatasetSplit) -> Result<(), DataError> {
    for (name, sets) in split.parts() {
        save_jsonl(dir.as_ref().join(name).join("data.jsonl"), sets)?;
    }
    Ok(())
}

pub fn load_splits(dir: impl AsRef<Path>) -> Result<DatasetSplit, DataError> {
    let load = |name: &str| load_jsonl(dir.as_ref().join(name).join("data.jsonl"));
    Ok(DatasetSplit {
        train: load("train")?,
        validation1: load("validation1")?,
        validation2: load("validation2")?,
        test: load("test")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{build_splits, SplitConfig, Style};

    #[test]
    fn round_trip() {
        for style in [Style::Snli, Style::Qa] {
            let split = build_splits(&SplitConfig::uniform(style, 10), 2).unwrap();
            let mut buf = Vec::new();
            write_jsonl(&mut buf, &split.train).unwrap();
            assert_eq!(read_jsonl(&buf[..]).unwrap(), split.train);
        }
    }

    #[test]
    fn missing_label_reports_line() {
        let good = r#"{"id":"a","statements":[{"kind":"sentence","text":"A."},{"kind":"sentence","text":"B."}],"label":"consistent","provenance":"C"}"#;
        let bad = r#"{"id":"b","statements":[{"kind":"sentence","text":"A."},{"kind":"sentence","text":"B."}],"provenance":"C"}"#;
        let text = format!("{good}\n{bad}\n");
        match read_jsonl(text.as_bytes()) {
            Err(DataError::MalformedRecord { line, reason }) => {
                assert_eq!(line, 2);
                assert!(reason.contains("label"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let sets = read_jsonl(good.as_bytes()).unwrap();
        assert!(!sets[0].has_semantics());
    }

    #[test]
    fn structural_violation_is_malformed() {
        let one = r#"{"id":"a","statements":[{"kind":"sentence","text":"A."}],"label":"consistent","provenance":"C"}"#;
        assert!(matches!(read_jsonl(one.as_bytes()), Err(DataError::MalformedRecord { line: 1, .. })));
        let lie = r#"{"id":"a","statements":[{"kind":"sentence","text":"A."},{"kind":"sentence","text":"B."}],"label":"consistent","provenance":"CI"}"#;
        assert!(read_jsonl(lie.as_bytes()).is_err());
    }
}
