use std::fmt;

use crate::error::{Error, Result};
use crate::nn::OptimizerKind;
use crate::policy::RolloutConfig;

use super::baseline::DEFAULT_BASELINE_DECAY;

/// Component switches of the ablation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Toggles {
    /// REINFORCE updates during rollouts.
    pub rf: bool,
    /// Importance-weighted retention of stored trajectories.
    pub is: bool,
    /// Positive-only memory.
    pub pm: bool,
    /// Upper bound `ω ≤ ω_max`.
    pub ub: bool,
    /// Lower bound `ω ≥ 1/ω_max`.
    pub lb: bool,
    /// Probability updating of stored trajectories.
    pub pb: bool,
    /// Early stopping of the retention phase.
    pub es: bool,
}

impl Toggles {
    pub const ALL: Toggles = Toggles {
        rf: true,
        is: true,
        pm: true,
        ub: true,
        lb: true,
        pb: true,
        es: true,
    };

    pub const REINFORCE: Toggles = Toggles {
        rf: true,
        is: false,
        pm: false,
        ub: false,
        lb: false,
        pb: false,
        es: false,
    };

    pub const NONE: Toggles = Toggles {
        rf: false,
        is: false,
        pm: false,
        ub: false,
        lb: false,
        pb: false,
        es: false,
    };

    pub fn as_array(&self) -> [(&'static str, bool); 7] {
        [
            ("rf", self.rf),
            ("is", self.is),
            ("pm", self.pm),
            ("ub", self.ub),
            ("lb", self.lb),
            ("pb", self.pb),
            ("es", self.es),
        ]
    }

    pub fn set(&mut self, name: &str, on: bool) -> bool {
        let slot = match name {
            "rf" => &mut self.rf,
            "is" => &mut self.is,
            "pm" => &mut self.pm,
            "ub" => &mut self.ub,
            "lb" => &mut self.lb,
            "pb" => &mut self.pb,
            "es" => &mut self.es,
            _ => return false,
        };
        *slot = on;
        true
    }

    pub fn validate(&self) -> Result<()> {
        if self.is && !self.rf {
            return Err(Error::ConfigInvalid("toggle `is` requires `rf`".into()));
        }
        Ok(())
    }
}

/// `RF+IS+PM` style label, or `-` when every toggle is off.
impl fmt::Display for Toggles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let on: Vec<String> = self
            .as_array()
            .iter()
            .filter(|(_, v)| *v)
            .map(|(k, _)| k.to_uppercase())
            .collect();
        if on.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&on.join("+"))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub optimizer: OptimizerKind,
    pub omega_max: f64,
    pub n_max: usize,
    /// Hard cap on retention passes per epoch when early stopping is on.
    pub max_passes: usize,
    /// Retention passes per epoch when early stopping is off.
    pub fixed_passes: usize,
    pub epochs: usize,
    pub episodes_per_epoch: usize,
    pub baseline_decay: f64,
    pub clip_norm: f64,
    pub toggles: Toggles,
    pub rollout: RolloutConfig,
    pub shuffle_memory: bool,
    /// Record wall-clock milliseconds in the metrics. Off by default so that
    /// metrics files are reproducible byte for byte.
    pub timing: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 0.003,
            optimizer: OptimizerKind::Sgd,
            omega_max: 10.0,
            n_max: 2,
            max_passes: 20,
            fixed_passes: 3,
            epochs: 30,
            episodes_per_epoch: 1500,
            baseline_decay: DEFAULT_BASELINE_DECAY,
            clip_norm: 5.0,
            toggles: Toggles::ALL,
            rollout: RolloutConfig::default(),
            shuffle_memory: false,
            timing: false,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::ConfigInvalid(m.to_string()));
        self.toggles.validate()?;
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return bad("lr must be positive");
        }
        if !(self.omega_max.is_finite() && self.omega_max >= 1.0) {
            return bad("omega_max must be >= 1");
        }
        if !(0.0..1.0).contains(&self.baseline_decay) {
            return bad("baseline_decay must lie in [0, 1)");
        }
        if !(self.clip_norm.is_finite() && self.clip_norm > 0.0) {
            return bad("clip_norm must be positive");
        }
        if self.episodes_per_epoch == 0 {
            return bad("episodes_per_epoch must be positive");
        }
        if self.max_passes == 0 {
            return bad("max_passes must be positive");
        }
        if self.rollout.max_rounds == 0 || self.rollout.max_qlen == 0 {
            return bad("max_rounds and max_qlen must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(Toggles::ALL.to_string(), "RF+IS+PM+UB+LB+PB+ES");
        assert_eq!(Toggles::REINFORCE.to_string(), "RF");
        assert_eq!(Toggles::NONE.to_string(), "-");
    }

    #[test]
    fn is_requires_rf() {
        let mut t = Toggles::ALL;
        t.rf = false;
        assert!(matches!(t.validate(), Err(Error::ConfigInvalid(_))));
        let cfg = TrainConfig {
            toggles: t,
            ..TrainConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(TrainConfig::default().validate().is_ok());
    }
}
