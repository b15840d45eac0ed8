use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::datagen::{build_splits, load_splits, partition, save_jsonl, save_splits, DatasetSplit, StatementSet};
use crate::evalkit::{
    ablation_report, build_eval_mixture, build_locate_mixture, evaluate_elementwise, evaluate_set_level, locate_gold,
    locate_metrics, mtr_grid, mtr_sweep, write_ablation_csv, write_locate_csv, write_metrics_csv, write_sweep_csv,
    Summary,
};
use crate::model::{load_params, save_params};
use crate::rng;
use crate::trainer::{init_params, train, train_binary, write_log_csv, Threshold, ThresholdSource};
use crate::verifier::{
    locate, EnergyScorer, ExternalScorer, GradedOracleScorer, OracleScorer, Scorer, SoftmaxScorer,
};

use super::config::{Arch, RunConfig, Strategy};
use super::{AblateArgs, CliError, Command, CommonArgs, EvalArgs, GenArgs, TrainArgs, TrainFlags};

fn base(name: &str, common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => {
            let mut c = RunConfig::default();
            if let Ok(s) = std::env::var("SETCOH_SEED") {
                c.seed = s
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("SETCOH_SEED must be an unsigned integer, got `{s}`")))?;
            }
            c
        }
    };
    cfg.command = name.to_string();
    if let Some(o) = &common.out {
        cfg.out = o.clone();
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn apply_train(cfg: &mut RunConfig, t: &TrainFlags) {
    let tc = &mut cfg.trainer;
    if let Some(r) = t.regime {
        tc.regime = r;
    }
    if let Some(a) = t.alpha {
        tc.alpha = a;
    }
    if let Some(lr) = t.lr {
        tc.learning_rate = lr;
    }
    if let Some(e) = t.epochs {
        tc.epochs = e;
    }
    if let Some(b) = t.batch_size {
        tc.batch_size = b;
    }
    if let Some(d) = t.dim {
        tc.model.dim = d;
    }
    if let Some(h) = t.hidden {
        tc.model.hidden = h;
    }
    if let Some(p) = t.pair_buckets {
        tc.model.pair_buckets = p;
    }
    if let Some(s) = t.init_scale {
        tc.model.init_scale = s;
    }
}

fn apply_eval(cfg: &mut RunConfig, a: &EvalArgs) {
    if let Some(d) = &a.data {
        cfg.data = Some(d.clone());
    }
    if let Some(s) = &a.split {
        cfg.split = s.clone();
    }
    if let Some(s) = a.strategy {
        cfg.strategy = s;
    }
    if let Some(m) = a.mtr {
        cfg.mtr = m;
    }
    if let Some(s) = &a.scorer {
        cfg.scorer = s.clone();
    }
    if let Some(n) = a.mixture_per_class {
        cfg.mixture_per_class = n;
    }
    if let Some(n) = a.grid_steps {
        cfg.grid_steps = n;
    }
}

/// Layers flags over the config file (or defaults and `$SETCOH_SEED`).
pub(super) fn resolve(command: &Command) -> Result<RunConfig, CliError> {
    let mut cfg = match command {
        Command::Gen(GenArgs { common, style, counts, max_distractors }) => {
            let mut c = base("gen", common)?;
            if let Some(s) = style {
                c.style = *s;
            }
            if let Some(n) = counts {
                c.counts = n.clone();
            }
            if let Some(m) = max_distractors {
                c.max_distractors = *m;
            }
            c
        }
        Command::Train(TrainArgs { common, data, arch, train }) => {
            let mut c = base("train", common)?;
            if let Some(d) = data {
                c.data = Some(d.clone());
            }
            if let Some(a) = arch {
                c.arch = *a;
            }
            apply_train(&mut c, train);
            c
        }
        Command::Verify(a) | Command::Locate(a) | Command::Sweep(a) => {
            let name = match command {
                Command::Verify(_) => "verify",
                Command::Locate(_) => "locate",
                _ => "sweep",
            };
            let mut c = base(name, &a.common)?;
            apply_eval(&mut c, a);
            c
        }
        Command::Ablate(AblateArgs { common, data, mixture_per_class, regimes, train }) => {
            let mut c = base("ablate", common)?;
            if let Some(d) = data {
                c.data = Some(d.clone());
            }
            if let Some(n) = mixture_per_class {
                c.mixture_per_class = *n;
            }
            if let Some(r) = regimes {
                c.regimes = r.clone();
            }
            apply_train(&mut c, train);
            c
        }
    };
    cfg.trainer.rng_seed = cfg.seed;
    if !(0.0..=1.0).contains(&cfg.mtr) {
        return Err(CliError::Usage(format!("--mtr must lie in [0, 1], got {}", cfg.mtr)));
    }
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, CliError> {
    Ok(BufWriter::new(fs::File::create(path)?))
}

fn prepare_out(cfg: &RunConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("config.snapshot"), cfg.snapshot())?;
    Ok(())
}

/// Writes a threshold as `key=value` lines; `threshold` comes first so the
/// value can be read back without the rest.
pub fn write_threshold(path: &Path, t: &Threshold) -> Result<(), CliError> {
    let mut w = create(path)?;
    writeln!(w, "threshold={:?}", t.value)?;
    writeln!(w, "source={}", t.source)?;
    if let Some(e) = t.learned_epoch {
        writeln!(w, "epoch={e}")?;
    }
    writeln!(w, "macro_accuracy={:?}", t.macro_accuracy)?;
    writeln!(w, "degenerate={}", t.degenerate)?;
    w.flush()?;
    Ok(())
}

pub fn read_threshold(path: &Path) -> Result<Threshold, CliError> {
    let text = fs::read_to_string(path)?;
    let mut t = Threshold::fixed(f64::NAN, ThresholdSource::Energy);
    let bad = |line: &str| CliError::Usage(format!("{}: cannot read `{line}`", path.display()));
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (k, v) = line.split_once('=').ok_or_else(|| bad(line))?;
        match k.trim() {
            "threshold" => t.value = v.trim().parse().map_err(|_| bad(line))?,
            "source" => {
                t.source = match v.trim() {
                    "energy" => ThresholdSource::Energy,
                    "inconsistent-softmax" => ThresholdSource::InconsistentSoftmax,
                    "oracle" => ThresholdSource::Oracle,
                    "external" => ThresholdSource::External,
                    _ => return Err(bad(line)),
                }
            }
            "epoch" => t.learned_epoch = Some(v.trim().parse().map_err(|_| bad(line))?),
            "macro_accuracy" => t.macro_accuracy = v.trim().parse().map_err(|_| bad(line))?,
            "degenerate" => t.degenerate = v.trim() == "true",
            _ => {}
        }
    }
    if t.value.is_nan() {
        return Err(CliError::Usage(format!("{}: no threshold line", path.display())));
    }
    Ok(t)
}

/// `oracle`, `graded-oracle`, a directory holding `model.bin` and
/// `threshold.txt`, a `model.bin` path (threshold read next to it) or an
/// external score file.
pub fn load_scorer(name: &str) -> Result<Box<dyn Scorer>, CliError> {
    match name {
        "oracle" => return Ok(Box::new(OracleScorer)),
        "graded-oracle" => return Ok(Box::new(GradedOracleScorer)),
        _ => {}
    }
    let path = PathBuf::from(name);
    let model = if path.is_dir() {
        Some((path.join("model.bin"), path.join("threshold.txt")))
    } else if path.file_name().is_some_and(|n| n == "model.bin") {
        Some((path.clone(), path.with_file_name("threshold.txt")))
    } else {
        None
    };
    match model {
        Some((m, t)) => {
            let params = load_params(&m)?;
            let threshold = read_threshold(&t)?;
            Ok(match threshold.source {
                ThresholdSource::InconsistentSoftmax => Box::new(SoftmaxScorer { params, threshold }),
                _ => Box::new(EnergyScorer { params, threshold }),
            })
        }
        None if path.is_file() => Ok(Box::new(ExternalScorer::from_file(&path)?)),
        None => Err(CliError::Usage(format!("scorer `{name}` is neither a known name nor an existing path"))),
    }
}

fn load_data(cfg: &RunConfig) -> Result<DatasetSplit, CliError> {
    Ok(load_splits(cfg.data_dir()?)?)
}

fn pick_split<'a>(split: &'a DatasetSplit, name: &str) -> Result<&'a [StatementSet], CliError> {
    split
        .parts()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.as_slice())
        .ok_or_else(|| CliError::Usage(format!("unknown split `{name}`")))
}

fn mixture_seed(cfg: &RunConfig) -> u64 {
    rng::derive(cfg.seed, &[rng::tag("mixture"), rng::tag(&cfg.split)])
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command.as_str() {
        "gen" => gen(cfg),
        "train" => train_cmd(cfg),
        "verify" => verify(cfg),
        "locate" => locate_cmd(cfg),
        "sweep" => sweep(cfg),
        "ablate" => ablate(cfg),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn gen(cfg: &RunConfig) -> Result<(), CliError> {
    let sc = cfg.split_config()?;
    let split = build_splits(&sc, cfg.seed)?;
    prepare_out(cfg)?;
    save_splits(&cfg.out, &split)?;
    Ok(())
}

fn train_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let split = load_data(cfg)?;
    cfg.trainer.check()?;
    prepare_out(cfg)?;
    let params = init_params(&split, &cfg.trainer);
    let outcome = match cfg.arch {
        Arch::Energy => train(params, &split, &cfg.trainer)?,
        Arch::Binary => train_binary(params, &split, &cfg.trainer)?,
    };
    save_params(&outcome.params, cfg.out.join("model.bin"))?;
    write_threshold(&cfg.out.join("threshold.txt"), &outcome.threshold)?;
    write_log_csv(create(&cfg.out.join("metrics.csv"))?, &outcome.log)?;
    Ok(())
}

fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let split = load_data(cfg)?;
    let (c, i) = partition(pick_split(&split, &cfg.split)?);
    let mixture = build_eval_mixture(&c, &i, cfg.mixture_per_class, mixture_seed(cfg))?;
    let scorer = load_scorer(&cfg.scorer)?;
    prepare_out(cfg)?;
    save_jsonl(cfg.out.join("data.jsonl"), &mixture)?;
    let (name, report) = match cfg.strategy {
        Strategy::Set => {
            ExternalScorer::write(create(&cfg.out.join("scores.csv"))?, scorer.as_ref(), &mixture)?;
            ("set".to_string(), evaluate_set_level(scorer.as_ref(), &mixture)?)
        }
        Strategy::Elementwise => (
            format!("elementwise@{}", cfg.mtr),
            evaluate_elementwise(scorer.as_ref(), &mixture, cfg.mtr)?,
        ),
    };
    write_metrics_csv(create(&cfg.out.join("metrics.csv"))?, &[(name, report)])?;
    let mut s = Summary::default();
    s.add_metrics("verify", &report);
    s.insert("threshold", scorer.threshold());
    s.write(create(&cfg.out.join("summary.json"))?)?;
    Ok(())
}

fn locate_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let split = load_data(cfg)?;
    let (c, i) = partition(pick_split(&split, &cfg.split)?);
    let mixture = build_locate_mixture(&c, &i, cfg.mixture_per_class, mixture_seed(cfg))?;
    let scorer = load_scorer(&cfg.scorer)?;
    prepare_out(cfg)?;
    save_jsonl(cfg.out.join("data.jsonl"), &mixture)?;
    let mut results = Vec::with_capacity(mixture.len());
    let mut trace = create(&cfg.out.join("locate.jsonl"))?;
    for s in &mixture {
        let r = locate(scorer.as_ref(), s)?;
        let gold = locate_gold(s);
        let row = serde_json::json!({
            "id": s.id,
            "provenance": s.provenance.to_string(),
            "gold": gold,
            "removed": r.removed_indices,
            "terminal": r.terminal,
            "trace": r.trace,
        });
        serde_json::to_writer(&mut trace, &row).map_err(std::io::Error::from)?;
        writeln!(trace)?;
        results.push((r, gold));
    }
    trace.flush()?;
    let report = locate_metrics(&results)?;
    write_locate_csv(create(&cfg.out.join("metrics.csv"))?, &[("locate".to_string(), report)])?;
    let mut s = Summary::default();
    s.add_locate("locate", &report);
    s.write(create(&cfg.out.join("summary.json"))?)?;
    Ok(())
}

fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let split = load_data(cfg)?;
    let (c, i) = partition(pick_split(&split, &cfg.split)?);
    let mixture = build_eval_mixture(&c, &i, cfg.mixture_per_class, mixture_seed(cfg))?;
    let scorer = load_scorer(&cfg.scorer)?;
    prepare_out(cfg)?;
    save_jsonl(cfg.out.join("data.jsonl"), &mixture)?;
    let rows = mtr_sweep(scorer.as_ref(), &mixture, &mtr_grid(cfg.grid_steps))?;
    write_sweep_csv(create(&cfg.out.join("metrics.csv"))?, &rows)?;
    Ok(())
}

fn ablate(cfg: &RunConfig) -> Result<(), CliError> {
    let split = load_data(cfg)?;
    cfg.trainer.check()?;
    prepare_out(cfg)?;
    let rows = ablation_report(&split, &cfg.regimes, &cfg.trainer, cfg.mixture_per_class)?;
    write_ablation_csv(create(&cfg.out.join("metrics.csv"))?, &rows)?;
    let mut s = Summary::default();
    for r in &rows {
        s.insert(format!("{}.macro_f1", r.regime), r.macro_f1);
        s.insert(format!("{}.ordered", r.regime), if r.ordered() { 1.0 } else { 0.0 });
    }
    s.write(create(&cfg.out.join("summary.json"))?)?;
    Ok(())
}
