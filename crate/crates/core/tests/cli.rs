use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

fn setcoh(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_setcoh"))
        .args(args)
        .env_remove("SETCOH_SEED")
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn ok(args: &[&str]) {
    let (code, err) = setcoh(args);
    assert_eq!(code, 0, "{args:?}: {err}");
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn metric(csv: &Path, column: &str) -> f64 {
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == column).unwrap();
    lines.next().unwrap().split(',').nth(k).unwrap().parse().unwrap()
}

fn gen(dir: &TempDir, style: &str, seed: &str) -> std::path::PathBuf {
    let out = dir.path().join(format!("{style}-{seed}"));
    ok(&["gen", "--style", style, "--counts", "40,20", "--seed", seed, "--out", p(&out)]);
    out
}

#[test]
fn gen_is_deterministic_and_seed_sensitive() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "snli", "5");
    let b = dir.path().join("again");
    ok(&["gen", "--style", "snli", "--counts", "40,20", "--seed", "5", "--out", p(&b)]);
    let c = gen(&dir, "snli", "6");
    for split in ["train", "validation1", "validation2", "test"] {
        let read = |d: &Path| fs::read(d.join(split).join("data.jsonl")).unwrap();
        assert_eq!(read(&a), read(&b), "{split}");
        assert_ne!(read(&a), read(&c), "{split}");
    }
    assert!(fs::read_to_string(a.join("config.snapshot")).unwrap().contains("\"seed\": 5"));
}

#[test]
fn oracle_set_level_beats_elementwise_on_sentences() {
    let dir = TempDir::new().unwrap();
    let data = gen(&dir, "snli", "1");
    let set = dir.path().join("set");
    let elem = dir.path().join("elem");
    ok(&["verify", "--data", p(&data), "--out", p(&set), "--mixture-per-class", "30"]);
    ok(&["verify", "--data", p(&data), "--out", p(&elem), "--mixture-per-class", "30", "--strategy", "elementwise", "--mtr", "0"]);
    assert_eq!(metric(&set.join("metrics.csv"), "macro_f1"), 1.0);
    assert!(metric(&elem.join("metrics.csv"), "macro_f1") < 1.0);
    assert_eq!(fs::read_to_string(set.join("data.jsonl")).unwrap().lines().count(), 14 * 30);
}

#[test]
fn oracle_locate_is_exact() {
    let dir = TempDir::new().unwrap();
    let data = gen(&dir, "qa", "2");
    let out = dir.path().join("loc");
    ok(&["locate", "--data", p(&data), "--out", p(&out), "--mixture-per-class", "20"]);
    assert_eq!(metric(&out.join("metrics.csv"), "em"), 1.0);
    assert_eq!(metric(&out.join("metrics.csv"), "f1"), 1.0);
    assert_eq!(fs::read_to_string(out.join("locate.jsonl")).unwrap().lines().count(), 80);
}

#[test]
fn score_file_reproduces_its_scorer() {
    let dir = TempDir::new().unwrap();
    let data = gen(&dir, "snli", "3");
    let first = dir.path().join("first");
    ok(&["verify", "--data", p(&data), "--out", p(&first), "--scorer", "graded-oracle", "--mixture-per-class", "10"]);
    let scores = first.join("scores.csv");
    let second = dir.path().join("second");
    ok(&["verify", "--data", p(&data), "--out", p(&second), "--scorer", p(&scores), "--mixture-per-class", "10"]);
    assert_eq!(fs::read(first.join("metrics.csv")).unwrap(), fs::read(second.join("metrics.csv")).unwrap());
}

#[test]
fn train_then_score_with_the_model() {
    let dir = TempDir::new().unwrap();
    let data = gen(&dir, "qa", "4");
    for arch in ["energy", "binary"] {
        let model = dir.path().join(arch);
        ok(&["train", "--data", p(&data), "--out", p(&model), "--arch", arch, "--epochs", "2", "--regime", "six"]);
        for f in ["model.bin", "threshold.txt", "metrics.csv", "config.snapshot"] {
            assert!(model.join(f).is_file(), "{arch} {f}");
        }
        let log = fs::read_to_string(model.join("metrics.csv")).unwrap();
        // header, the pre-training row, two epochs
        assert_eq!(log.lines().count(), 4);
        let v = dir.path().join(format!("{arch}-verify"));
        ok(&["verify", "--data", p(&data), "--out", p(&v), "--scorer", p(&model), "--mixture-per-class", "5"]);
        let f1 = metric(&v.join("metrics.csv"), "macro_f1");
        assert!((0.0..=1.0).contains(&f1));
        let l = dir.path().join(format!("{arch}-locate"));
        ok(&["locate", "--data", p(&data), "--out", p(&l), "--scorer", p(&model.join("model.bin")), "--mixture-per-class", "5"]);
    }
    let source = fs::read_to_string(dir.path().join("binary/threshold.txt")).unwrap();
    assert!(source.contains("source=inconsistent-softmax"));
}

#[test]
fn sweep_and_ablate_write_tables() {
    let dir = TempDir::new().unwrap();
    let data = gen(&dir, "snli", "8");
    let sweep = dir.path().join("sweep");
    ok(&["sweep", "--data", p(&data), "--out", p(&sweep), "--grid-steps", "4", "--mixture-per-class", "5"]);
    // 5 mtr values times (all + 4 part counts) plus header
    assert_eq!(fs::read_to_string(sweep.join("metrics.csv")).unwrap().lines().count(), 1 + 5 * 5);
    let ab = dir.path().join("ablate");
    ok(&["ablate", "--data", p(&data), "--out", p(&ab), "--epochs", "1", "--regimes", "basic,eight", "--mixture-per-class", "3"]);
    let summary = fs::read_to_string(ab.join("summary.json")).unwrap();
    assert!(summary.contains("basic.macro_f1") && summary.contains("eight.macro_f1"));
}

#[test]
fn seed_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"seed": 11, "counts": [10, 5]}"#).unwrap();
    let run = |extra: &[&str], env: Option<&str>| {
        let out = dir.path().join(format!("o{}", extra.len() * 10 + env.map_or(0, |_| 1)));
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_setcoh"));
        cmd.args(["gen", "--out", p(&out)]).args(extra).env_remove("SETCOH_SEED");
        if let Some(s) = env {
            cmd.env("SETCOH_SEED", s);
        }
        assert!(cmd.status().unwrap().success());
        let snap = fs::read_to_string(out.join("config.snapshot")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&snap).unwrap();
        v["seed"].as_u64().unwrap()
    };
    assert_eq!(run(&["--counts", "10,5"], None), 0);
    assert_eq!(run(&["--counts", "10,5"], Some("9")), 9);
    assert_eq!(run(&["--config", p(&cfg)], Some("9")), 11);
    assert_eq!(run(&["--config", p(&cfg), "--seed", "13"], Some("9")), 13);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(setcoh(&["frobnicate"]).0, 2);
    assert_eq!(setcoh(&["verify", "--data", "x", "--mtr", "1.5"]).0, 2);
    assert_eq!(setcoh(&["verify"]).0, 2);
    assert_eq!(setcoh(&["gen", "--counts", "1,2,3"]).0, 2);
    assert_eq!(setcoh(&["train", "--data", p(dir.path()), "--alpha", "-1"]).0, 2);
    let missing = dir.path().join("nothing");
    assert_eq!(setcoh(&["verify", "--data", p(&missing), "--out", p(dir.path())]).0, 3);
    assert_eq!(setcoh(&["--help"]).0, 0);
}
