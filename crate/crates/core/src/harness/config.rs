//! Flat `key = value` run configuration.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::env::SplitSizes;
use crate::error::{Error, Result};
use crate::nn::OptimizerKind;
use crate::policy::{PolicyDims, RolloutConfig};
use crate::trainers::{PretrainConfig, Toggles, TrainConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub data_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub checkpoint: Option<PathBuf>,
    pub seed: u64,
    pub n_train: usize,
    pub n_val: usize,
    pub n_test: usize,
    pub hidden: usize,
    pub embed: usize,
    pub pretrain_epochs: usize,
    pub pretrain_lr: f64,
    pub pretrain_optimizer: OptimizerKind,
    pub epochs: usize,
    pub episodes_per_epoch: usize,
    pub lr: f64,
    pub optimizer: OptimizerKind,
    pub omega_max: f64,
    pub n_max: usize,
    pub max_passes: usize,
    pub fixed_passes: usize,
    pub baseline_decay: f64,
    pub clip_norm: f64,
    pub max_rounds: usize,
    pub max_qlen: usize,
    pub toggles: Toggles,
    pub shuffle_memory: bool,
    pub timing: bool,
    pub ablate_epochs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = TrainConfig::default();
        let p = PretrainConfig::default();
        let dims = PolicyDims::default();
        RunConfig {
            data_dir: None,
            out_dir: PathBuf::from("runs"),
            checkpoint: None,
            seed: 1,
            n_train: 3000,
            n_val: 1000,
            n_test: 1000,
            hidden: dims.hidden,
            embed: dims.embed,
            pretrain_epochs: p.epochs,
            pretrain_lr: p.lr,
            pretrain_optimizer: p.optimizer,
            epochs: t.epochs,
            episodes_per_epoch: t.episodes_per_epoch,
            lr: t.lr,
            optimizer: t.optimizer,
            omega_max: t.omega_max,
            n_max: t.n_max,
            max_passes: t.max_passes,
            fixed_passes: t.fixed_passes,
            baseline_decay: t.baseline_decay,
            clip_norm: t.clip_norm,
            max_rounds: t.rollout.max_rounds,
            max_qlen: t.rollout.max_qlen,
            toggles: t.toggles,
            shuffle_memory: t.shuffle_memory,
            timing: t.timing,
            ablate_epochs: t.epochs,
        }
    }
}

/// Every accepted key, in the order [`RunConfig`] prints them.
pub const KEYS: &[&str] = &[
    "data_dir",
    "out_dir",
    "checkpoint",
    "seed",
    "n_train",
    "n_val",
    "n_test",
    "hidden",
    "embed",
    "pretrain_epochs",
    "pretrain_lr",
    "pretrain_optimizer",
    "epochs",
    "episodes_per_epoch",
    "lr",
    "optimizer",
    "omega_max",
    "n_max",
    "max_passes",
    "fixed_passes",
    "baseline_decay",
    "clip_norm",
    "max_rounds",
    "max_qlen",
    "toggles.rf",
    "toggles.is",
    "toggles.pm",
    "toggles.ub",
    "toggles.lb",
    "toggles.pb",
    "toggles.es",
    "shuffle_memory",
    "timing",
    "ablate_epochs",
];

fn invalid(key: &str, value: &str, why: &str) -> Error {
    Error::ConfigInvalid(format!("{key} = {value}: {why}"))
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| invalid(key, value, "cannot parse"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "1" | "yes" => Ok(true),
        "false" | "off" | "0" | "no" => Ok(false),
        _ => Err(invalid(key, value, "expected true/false")),
    }
}

fn ranged<T: FromStr + PartialOrd + Copy>(key: &str, value: &str, lo: T, hi: T) -> Result<T> {
    let v: T = parse(key, value)?;
    if v < lo || v > hi {
        return Err(invalid(key, value, "out of range"));
    }
    Ok(v)
}

fn positive_f64(key: &str, value: &str) -> Result<f64> {
    let v: f64 = parse(key, value)?;
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid(key, value, "must be a positive number"));
    }
    Ok(v)
}

impl RunConfig {
    /// Assigns one key. Unknown keys and out-of-range values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "data_dir" => self.data_dir = Some(PathBuf::from(value)),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "checkpoint" => self.checkpoint = Some(PathBuf::from(value)),
            "seed" => self.seed = parse(key, value)?,
            "n_train" => self.n_train = ranged(key, value, 1, 1_000_000)?,
            "n_val" => self.n_val = ranged(key, value, 1, 1_000_000)?,
            "n_test" => self.n_test = ranged(key, value, 1, 1_000_000)?,
            "hidden" => self.hidden = ranged(key, value, 1, 4096)?,
            "embed" => self.embed = ranged(key, value, 1, 4096)?,
            "pretrain_epochs" => self.pretrain_epochs = ranged(key, value, 0, 10_000)?,
            "pretrain_lr" => self.pretrain_lr = positive_f64(key, value)?,
            "pretrain_optimizer" => self.pretrain_optimizer = parse(key, value)?,
            "epochs" => self.epochs = ranged(key, value, 0, 100_000)?,
            "episodes_per_epoch" => self.episodes_per_epoch = ranged(key, value, 1, 100_000_000)?,
            "lr" => self.lr = positive_f64(key, value)?,
            "optimizer" => self.optimizer = parse(key, value)?,
            "omega_max" => {
                let v = positive_f64(key, value)?;
                if v < 1.0 {
                    return Err(invalid(key, value, "must be >= 1"));
                }
                self.omega_max = v;
            }
            "n_max" => self.n_max = ranged(key, value, 0, 1000)?,
            "max_passes" => self.max_passes = ranged(key, value, 1, 10_000)?,
            "fixed_passes" => self.fixed_passes = ranged(key, value, 1, 10_000)?,
            "baseline_decay" => {
                let v: f64 = parse(key, value)?;
                if !(0.0..1.0).contains(&v) {
                    return Err(invalid(key, value, "must lie in [0, 1)"));
                }
                self.baseline_decay = v;
            }
            "clip_norm" => self.clip_norm = positive_f64(key, value)?,
            "max_rounds" => self.max_rounds = ranged(key, value, 1, 64)?,
            "max_qlen" => self.max_qlen = ranged(key, value, 1, 64)?,
            "shuffle_memory" => self.shuffle_memory = parse_bool(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            "ablate_epochs" => self.ablate_epochs = ranged(key, value, 0, 100_000)?,
            _ => {
                let on = key
                    .strip_prefix("toggles.")
                    .map(|name| (name, parse_bool(key, value)));
                match on {
                    Some((name, on)) => {
                        let on = on?;
                        if !self.toggles.set(name, on) {
                            return Err(Error::ConfigInvalid(format!("unknown key `{key}`")));
                        }
                    }
                    None => return Err(Error::ConfigInvalid(format!("unknown key `{key}`"))),
                }
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::ConfigInvalid(format!("line {}: expected key = value", n + 1))
            })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::ConfigInvalid(format!("expected key=value, got `{kv}`")))?;
        self.set(k.trim(), v)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Cross-key checks that single assignments cannot catch.
    pub fn validate(&self) -> Result<()> {
        self.toggles.validate()?;
        self.train_config().validate()
    }

    pub fn data_dir(&self) -> PathBuf {
        self.data_dir
            .clone()
            .unwrap_or_else(|| self.out_dir.join("data"))
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        self.checkpoint
            .clone()
            .unwrap_or_else(|| self.out_dir.join("pretrain.ckpt"))
    }

    pub fn split_sizes(&self) -> SplitSizes {
        SplitSizes {
            train: self.n_train,
            val: self.n_val,
            test: self.n_test,
        }
    }

    pub fn dims(&self) -> PolicyDims {
        PolicyDims {
            hidden: self.hidden,
            embed: self.embed,
        }
    }

    pub fn rollout(&self) -> RolloutConfig {
        RolloutConfig {
            max_rounds: self.max_rounds,
            max_qlen: self.max_qlen,
        }
    }

    pub fn pretrain_config(&self) -> PretrainConfig {
        PretrainConfig {
            epochs: self.pretrain_epochs,
            lr: self.pretrain_lr,
            optimizer: self.pretrain_optimizer,
            clip_norm: self.clip_norm,
            seed: derive_seed(self.seed, SeedTag::Pretrain),
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            lr: self.lr,
            optimizer: self.optimizer,
            omega_max: self.omega_max,
            n_max: self.n_max,
            max_passes: self.max_passes,
            fixed_passes: self.fixed_passes,
            epochs: self.epochs,
            episodes_per_epoch: self.episodes_per_epoch,
            baseline_decay: self.baseline_decay,
            clip_norm: self.clip_norm,
            toggles: self.toggles,
            rollout: self.rollout(),
            shuffle_memory: self.shuffle_memory,
            timing: self.timing,
            seed: derive_seed(self.seed, SeedTag::Train),
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        writeln!(
            f,
            "data_dir = {}",
            opt(&self.data_dir).unwrap_or_else(|| self.data_dir().display().to_string())
        )?;
        writeln!(f, "out_dir = {}", self.out_dir.display())?;
        writeln!(f, "checkpoint = {}", self.checkpoint_path().display())?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "n_train = {}", self.n_train)?;
        writeln!(f, "n_val = {}", self.n_val)?;
        writeln!(f, "n_test = {}", self.n_test)?;
        writeln!(f, "hidden = {}", self.hidden)?;
        writeln!(f, "embed = {}", self.embed)?;
        writeln!(f, "pretrain_epochs = {}", self.pretrain_epochs)?;
        writeln!(f, "pretrain_lr = {:?}", self.pretrain_lr)?;
        writeln!(f, "pretrain_optimizer = {}", self.pretrain_optimizer)?;
        writeln!(f, "epochs = {}", self.epochs)?;
        writeln!(f, "episodes_per_epoch = {}", self.episodes_per_epoch)?;
        writeln!(f, "lr = {:?}", self.lr)?;
        writeln!(f, "optimizer = {}", self.optimizer)?;
        writeln!(f, "omega_max = {:?}", self.omega_max)?;
        writeln!(f, "n_max = {}", self.n_max)?;
        writeln!(f, "max_passes = {}", self.max_passes)?;
        writeln!(f, "fixed_passes = {}", self.fixed_passes)?;
        writeln!(f, "baseline_decay = {:?}", self.baseline_decay)?;
        writeln!(f, "clip_norm = {:?}", self.clip_norm)?;
        writeln!(f, "max_rounds = {}", self.max_rounds)?;
        writeln!(f, "max_qlen = {}", self.max_qlen)?;
        for (k, v) in self.toggles.as_array() {
            writeln!(f, "toggles.{k} = {v}")?;
        }
        writeln!(f, "shuffle_memory = {}", self.shuffle_memory)?;
        writeln!(f, "timing = {}", self.timing)?;
        write!(f, "ablate_epochs = {}", self.ablate_epochs)
    }
}

/// Independent random streams derived from the run seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedTag {
    Dataset,
    Init,
    Pretrain,
    Train,
    Validation,
    Test,
}

pub fn derive_seed(seed: u64, tag: SeedTag) -> u64 {
    let k = match tag {
        SeedTag::Dataset => 0,
        SeedTag::Init => 1,
        SeedTag::Pretrain => 2,
        SeedTag::Train => 3,
        SeedTag::Validation => 4,
        SeedTag::Test => 5,
    };
    // splitmix64 finalizer over (seed, tag)
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        let mut a = RunConfig::default();
        a.set("toggles.pb", "off").unwrap();
        a.set("lr", "0.003").unwrap();
        let mut b = RunConfig::default();
        b.apply_text(&a.to_string()).unwrap();
        assert_eq!(a.train_config(), b.train_config());
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn every_key_is_printed() {
        let text = RunConfig::default().to_string();
        let printed: Vec<&str> = text
            .lines()
            .map(|l| l.split(" = ").next().unwrap())
            .collect();
        assert_eq!(printed, KEYS);
    }

    #[test]
    fn strictness() {
        let mut c = RunConfig::default();
        assert!(c.set("learning_rate", "0.1").is_err());
        assert!(c.set("toggles.xx", "on").is_err());
        assert!(c.set("omega_max", "0.5").is_err());
        assert!(c.set("baseline_decay", "1.0").is_err());
        assert!(c.set("lr", "-1").is_err());
        assert!(c.set("lr", "nan").is_err());
        assert!(c.set("n_train", "0").is_err());
        assert!(c.apply_text("seed 4").is_err());
        assert!(c.apply_text("# comment\n\nseed = 4 # trailing\n").is_ok());
        assert_eq!(c.seed, 4);
        c.set("toggles.rf", "off").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn seeds_differ_by_tag() {
        let tags = [
            SeedTag::Dataset,
            SeedTag::Init,
            SeedTag::Pretrain,
            SeedTag::Train,
            SeedTag::Validation,
            SeedTag::Test,
        ];
        let seeds: std::collections::HashSet<u64> =
            tags.iter().map(|&t| derive_seed(7, t)).collect();
        assert_eq!(seeds.len(), tags.len());
    }
}
