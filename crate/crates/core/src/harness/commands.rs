use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ablation::{AblationReport, AblationResult, AblationRow, RowOutcome};
use super::config::{derive_seed, RunConfig, SeedTag};
use crate::env::{generate_dataset, read_split, GameRecord, GridImage, Split, SplitSizes};
use crate::error::{Error, Result};
use crate::nn::{checkpoint, Parameterized};
use crate::policy::QuestionerPolicy;
use crate::trainers::{self, Evaluator, PretrainEpoch, Toggles, TrainOutcome};

/// The three dataset splits.
#[derive(Clone, Debug)]
pub struct Splits {
    pub train: Vec<GameRecord>,
    pub val: Vec<GameRecord>,
    pub test: Vec<GameRecord>,
}

impl Splits {
    pub fn load(dir: &Path) -> Result<Self> {
        Ok(Splits {
            train: read_split(dir, Split::Train)?,
            val: read_split(dir, Split::Val)?,
            test: read_split(dir, Split::Test)?,
        })
    }

    pub fn get(&self, split: Split) -> &[GameRecord] {
        match split {
            Split::Train => &self.train,
            Split::Val => &self.val,
            Split::Test => &self.test,
        }
    }
}

pub fn grids(games: &[GameRecord]) -> Vec<GridImage> {
    games.iter().map(|g| g.grid.clone()).collect()
}

/// Evaluator over a split, seeded per split from the run seed.
pub fn evaluator(cfg: &RunConfig, games: &[GameRecord], split: Split) -> Evaluator {
    let tag = match split {
        Split::Val => SeedTag::Validation,
        Split::Train | Split::Test => SeedTag::Test,
    };
    Evaluator::new(grids(games), cfg.rollout(), derive_seed(cfg.seed, tag))
}

pub fn load_policy(path: &Path) -> Result<QuestionerPolicy> {
    QuestionerPolicy::from_params(checkpoint::load(path)?)
}

pub fn save_policy(policy: &QuestionerPolicy, path: &Path) -> Result<()> {
    checkpoint::save(policy.params(), path)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Debug)]
pub struct GenerateReport {
    pub dir: PathBuf,
    pub sizes: SplitSizes,
}

impl fmt::Display for GenerateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "wrote {} train / {} val / {} test games to {}",
            self.sizes.train,
            self.sizes.val,
            self.sizes.test,
            self.dir.display()
        )
    }
}

pub fn cmd_generate(cfg: &RunConfig) -> Result<GenerateReport> {
    cfg.validate()?;
    let dir = cfg.data_dir();
    generate_dataset(
        cfg.split_sizes(),
        derive_seed(cfg.seed, SeedTag::Dataset),
        &dir,
    )?;
    Ok(GenerateReport {
        dir,
        sizes: cfg.split_sizes(),
    })
}

#[derive(Clone, Debug)]
pub struct PretrainReport {
    pub epochs: Vec<PretrainEpoch>,
    pub checkpoint: PathBuf,
    pub metrics: PathBuf,
    pub val_success: f64,
}

impl fmt::Display for PretrainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.epochs {
            writeln!(
                f,
                "epoch {:>3}  train ppl {:.4}  val ppl {:.4}  val success {:.4}",
                e.epoch, e.train_perplexity, e.val_perplexity, e.val_success
            )?;
        }
        write!(
            f,
            "checkpoint {} (val success {:.4})",
            self.checkpoint.display(),
            self.val_success
        )
    }
}

fn pretrain_csv(rows: &[PretrainEpoch]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["epoch", "train_perplexity", "val_perplexity", "val_success"])?;
    for r in rows {
        w.write_record([
            r.epoch.to_string(),
            format!("{:?}", r.train_perplexity),
            format!("{:?}", r.val_perplexity),
            format!("{:?}", r.val_success),
        ])?;
    }
    w.into_inner()
        .map_err(|e| Error::TrainingFailed(format!("csv buffer: {e}")))
}

pub fn cmd_pretrain(cfg: &RunConfig) -> Result<PretrainReport> {
    cfg.validate()?;
    let data = Splits::load(&cfg.data_dir())?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, SeedTag::Init));
    let init = QuestionerPolicy::new(cfg.dims(), &mut rng);
    let validator = evaluator(cfg, &data.val, Split::Val);
    let out = trainers::pretrain(
        init,
        &data.train,
        &data.val,
        &validator,
        &cfg.pretrain_config(),
    )?;
    let val_success = match out.best_epoch {
        Some(e) => out.epochs[e - 1].val_success,
        None => validator.success(&out.best)?,
    };
    let ckpt = cfg.checkpoint_path();
    save_policy(&out.best, &ckpt)?;
    let metrics = cfg.out_dir.join("pretrain_metrics.csv");
    write_file(&metrics, &pretrain_csv(&out.epochs)?)?;
    Ok(PretrainReport {
        epochs: out.epochs,
        checkpoint: ckpt,
        metrics,
        val_success,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrainMode {
    Reinforce,
    Pmr,
}

impl TrainMode {
    pub fn name(&self) -> &'static str {
        match self {
            TrainMode::Reinforce => "reinforce",
            TrainMode::Pmr => "pmr",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    pub mode: TrainMode,
    pub outcome: TrainOutcome,
    pub pretrained_val: f64,
    pub final_val: f64,
    pub test_success: f64,
    pub metrics: PathBuf,
    pub checkpoint: PathBuf,
}

impl fmt::Display for TrainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.outcome.metrics {
            writeln!(
                f,
                "epoch {:>3}  samples {:>7}  train {:.4}  val {:.4}  memory {:>5}  passes {:>2}  reuse {:.3}",
                m.epoch,
                m.env_samples,
                m.train_success,
                m.val_success,
                m.memory_size,
                m.retention_passes,
                m.reuse_ratio
            )?;
        }
        writeln!(f, "pretrained val success {:.4}", self.pretrained_val)?;
        writeln!(f, "final val success {:.4}", self.final_val)?;
        match self.outcome.best_val {
            Some(v) => writeln!(f, "best val success {v:.4}")?,
            None => writeln!(f, "best val success n/a (no training)")?,
        }
        write!(
            f,
            "test success {:.4} (best checkpoint {})",
            self.test_success,
            self.checkpoint.display()
        )
    }
}

/// Toggles a mode runs with: `reinforce` forces plain REINFORCE, `pmr` uses
/// the configured toggles.
pub fn mode_toggles(cfg: &RunConfig, mode: TrainMode) -> Toggles {
    match mode {
        TrainMode::Reinforce => Toggles::REINFORCE,
        TrainMode::Pmr => cfg.toggles,
    }
}

pub fn cmd_train(cfg: &RunConfig, mode: TrainMode) -> Result<TrainReport> {
    cfg.validate()?;
    let start = load_policy(&cfg.checkpoint_path())?;
    let data = Splits::load(&cfg.data_dir())?;
    let validator = evaluator(cfg, &data.val, Split::Val);
    let tester = evaluator(cfg, &data.test, Split::Test);
    let mut tc = cfg.train_config();
    tc.toggles = mode_toggles(cfg, mode);
    let pretrained_val = validator.success(&start)?;
    let outcome = trainers::train(start, &grids(&data.train), &validator, &tc)?;
    let test_success = tester.success(&outcome.best)?;
    let final_val = outcome
        .metrics
        .last()
        .map_or(pretrained_val, |m| m.val_success);
    let metrics = cfg.out_dir.join(format!("{}_metrics.csv", mode.name()));
    let ckpt = cfg.out_dir.join(format!("{}_best.ckpt", mode.name()));
    trainers::write_metrics(&metrics, &outcome.metrics)?;
    save_policy(&outcome.best, &ckpt)?;
    Ok(TrainReport {
        mode,
        outcome,
        pretrained_val,
        final_val,
        test_success,
        metrics,
        checkpoint: ckpt,
    })
}

/// Trains every requested row from the same pretrained checkpoint for
/// `ablate_epochs` epochs and reports test success of the best-validation
/// parameters. Row failures are recorded and the remaining rows still run.
pub fn run_ablation(cfg: &RunConfig, rows: &[AblationRow]) -> Result<AblationReport> {
    cfg.validate()?;
    let start = load_policy(&cfg.checkpoint_path())?;
    let data = Splits::load(&cfg.data_dir())?;
    let validator = evaluator(cfg, &data.val, Split::Val);
    let tester = evaluator(cfg, &data.test, Split::Test);
    let train_grids = grids(&data.train);
    let pretrained_val = validator.success(&start)?;
    let pretrained_test = tester.success(&start)?;

    let mut done: HashMap<(Toggles, u64), std::result::Result<RowOutcome, String>> = HashMap::new();
    let mut results = Vec::with_capacity(rows.len());
    for row in rows {
        let outcome = if row.toggles == Toggles::NONE {
            Ok(RowOutcome {
                test_success: pretrained_test,
                best_val: Some(pretrained_val),
                metrics: Vec::new(),
                outside_region_applied: 0,
            })
        } else if let Some(prev) = done.get(&(row.toggles, row.omega_max.to_bits())) {
            prev.clone()
        } else {
            let mut tc = cfg.train_config();
            tc.toggles = row.toggles;
            tc.omega_max = row.omega_max;
            tc.epochs = cfg.ablate_epochs;
            log::info!(
                "ablation row {}: {} omega_max {}",
                row.id,
                row.toggles,
                row.omega_max
            );
            let res = trainers::train(start.clone(), &train_grids, &validator, &tc).and_then(|o| {
                Ok(RowOutcome {
                    test_success: tester.success(&o.best)?,
                    best_val: o.best_val,
                    metrics: o.metrics,
                    outside_region_applied: o.outside_region_applied,
                })
            });
            let res = res.map_err(|e| e.to_string());
            done.insert((row.toggles, row.omega_max.to_bits()), res.clone());
            res
        };
        if let Err(e) = &outcome {
            log::warn!("ablation row {} failed: {e}", row.id);
        }
        results.push(AblationResult { row: *row, outcome });
    }
    Ok(AblationReport {
        pretrained_val,
        pretrained_test,
        results,
    })
}

pub fn cmd_ablate(cfg: &RunConfig, rows: &[AblationRow]) -> Result<AblationReport> {
    let report = run_ablation(cfg, rows)?;
    write_file(&cfg.out_dir.join("ablation.csv"), &report.to_csv()?)?;
    write_file(
        &cfg.out_dir.join("ablation.txt"),
        report.to_table().as_bytes(),
    )?;
    for r in &report.results {
        if let Ok(o) = &r.outcome {
            if !o.metrics.is_empty() {
                let p = cfg
                    .out_dir
                    .join("ablation")
                    .join(format!("row{:02}_metrics.csv", r.row.id));
                trainers::write_metrics(&p, &o.metrics)?;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub split: Split,
    pub games: usize,
    pub success: f64,
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} success {:.4} over {} games",
            self.split, self.success, self.games
        )
    }
}

pub fn cmd_eval(cfg: &RunConfig, checkpoint: Option<&Path>, split: Split) -> Result<EvalReport> {
    cfg.validate()?;
    let path = checkpoint.map_or_else(|| cfg.checkpoint_path(), Path::to_path_buf);
    let policy = load_policy(&path)?;
    let games = read_split(&cfg.data_dir(), split)?;
    let success = evaluator(cfg, &games, split).success(&policy)?;
    Ok(EvalReport {
        split,
        games: games.len(),
        success,
    })
}
