use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::baseline::BaselineEma;
use super::config::TrainConfig;
use super::eval::Evaluator;
use super::importance::TrustRegion;
use super::memory::MemoryBuffer;
use super::metrics::{EpochDiagnostics, EpochMetrics};
use super::retention::{retention_pass, PassStats, RetentionConfig};
use super::update::reinforce_update;
use crate::env::{GridImage, GRID_CELLS};
use crate::error::{Error, Result};
use crate::nn::{Optimizer, ParamStore, Parameterized};
use crate::policy::{rollout, QuestionerPolicy};

const ROLLOUT_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub metrics: Vec<EpochMetrics>,
    pub diagnostics: Vec<EpochDiagnostics>,
    /// Parameters with the highest validation success seen during training,
    /// or the starting parameters if nothing was trained.
    pub best: QuestionerPolicy,
    pub best_val: Option<f64>,
    /// Every validation score that produced a new best, in order.
    pub saved_scores: Vec<f64>,
    pub last: QuestionerPolicy,
    pub outside_region_applied: usize,
}

struct BestTracker {
    score: Option<f64>,
    params: Option<ParamStore>,
    saved: Vec<f64>,
}

impl BestTracker {
    fn offer(&mut self, score: f64, policy: &QuestionerPolicy) {
        if self.score.is_none_or(|s| score > s) {
            self.score = Some(score);
            self.params = Some(policy.params().clone());
            self.saved.push(score);
        }
    }
}

/// Runs REINFORCE epochs, each optionally followed by a retention phase over
/// the epoch's memory. With `toggles.is` off this is plain REINFORCE.
pub fn train(
    mut policy: QuestionerPolicy,
    train_grids: &[GridImage],
    validator: &Evaluator,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if train_grids.is_empty() && cfg.epochs > 0 {
        return Err(Error::ConfigInvalid("no training grids".into()));
    }
    let start = policy.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(ROLLOUT_STREAM);
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    shuffle_rng.set_stream(SHUFFLE_STREAM);

    let t = cfg.toggles;
    let mut opt = Optimizer::new(cfg.optimizer, cfg.lr, policy.params());
    let mut baseline = BaselineEma::new(0.0, cfg.baseline_decay);
    let mut memory = MemoryBuffer::new(t.pm);
    let retention = RetentionConfig {
        region: TrustRegion::new(cfg.omega_max, t.ub, t.lb),
        prob_update: t.pb,
        clip_norm: cfg.clip_norm,
        shuffle: cfg.shuffle_memory,
    };
    let mut best = BestTracker {
        score: None,
        params: None,
        saved: Vec::new(),
    };
    let mut metrics = Vec::with_capacity(cfg.epochs);
    let mut diagnostics = Vec::with_capacity(cfg.epochs);
    let mut env_samples = 0u64;
    let mut outside_total = 0usize;

    for epoch in 1..=cfg.epochs {
        let clock = Instant::now();
        memory.clear(epoch);
        let mut wins = 0.0;
        for _ in 0..cfg.episodes_per_epoch {
            let grid = &train_grids[rng.gen_range(0..train_grids.len())];
            let target = rng.gen_range(0..GRID_CELLS);
            let traj = rollout(&policy, grid, target, cfg.rollout, &mut rng)?;
            env_samples += 1;
            wins += traj.reward;
            if t.rf {
                reinforce_update(
                    &mut policy,
                    &traj,
                    baseline.value(),
                    cfg.clip_norm,
                    &mut opt,
                );
            }
            baseline.update(traj.reward);
            if t.is {
                memory.push(traj);
            }
        }
        if !policy.params().values_finite() {
            return Err(Error::TrainingFailed(format!(
                "non-finite parameters after epoch {epoch} rollouts"
            )));
        }

        let mut diag = EpochDiagnostics {
            baseline: baseline.value(),
            ..EpochDiagnostics::default()
        };
        let mut val = validator.success(&policy)?;
        diag.post_rollout_val = val;
        best.offer(val, &policy);

        let mut passes = 0usize;
        if t.is && !memory.is_empty() {
            let b = baseline.value();
            let mut anchor = policy.params().clone();
            let mut anchor_val = val;
            let mut stagnant = 0usize;
            loop {
                let stats = retention_pass(
                    &mut policy,
                    &mut memory,
                    &retention,
                    b,
                    &mut opt,
                    &mut shuffle_rng,
                );
                passes += 1;
                absorb(&mut diag, &stats);
                let finite = policy.params().values_finite();
                let v = if finite {
                    validator.success(&policy)?
                } else {
                    f64::NEG_INFINITY
                };
                if t.es {
                    if v > anchor_val {
                        anchor.copy_values_from(policy.params());
                        anchor_val = v;
                        stagnant = 0;
                        best.offer(v, &policy);
                    } else {
                        stagnant += 1;
                    }
                    if stagnant >= cfg.n_max || passes >= cfg.max_passes {
                        break;
                    }
                } else {
                    if !finite {
                        return Err(Error::TrainingFailed(format!(
                            "non-finite parameters in epoch {epoch} retention"
                        )));
                    }
                    best.offer(v, &policy);
                    val = v;
                    if passes >= cfg.fixed_passes {
                        break;
                    }
                }
            }
            if t.es {
                if stagnant > 0 {
                    policy.params_mut().copy_values_from(&anchor);
                    diag.reverted = true;
                }
                val = anchor_val;
            }
            if diag.evaluated > 0 {
                diag.mean_log_weight /= passes as f64;
                diag.mean_js /= passes as f64;
            }
        }
        outside_total += diag.outside_region_applied;

        let row = EpochMetrics {
            epoch,
            env_samples,
            train_success: wins / cfg.episodes_per_epoch as f64,
            val_success: val,
            memory_size: memory.len(),
            retention_passes: passes,
            reuse_ratio: if diag.evaluated == 0 {
                0.0
            } else {
                diag.accepted as f64 / diag.evaluated as f64
            },
            wall_ms: if cfg.timing {
                clock.elapsed().as_millis() as u64
            } else {
                0
            },
        };
        log::info!(
            "epoch {epoch}: train {:.4} val {:.4} (post-rollout {:.4}) memory {} passes {} reuse {:.3} mean ln w {:.3} js {:.2e}{}",
            row.train_success,
            row.val_success,
            diag.post_rollout_val,
            row.memory_size,
            row.retention_passes,
            row.reuse_ratio,
            diag.mean_log_weight,
            diag.mean_js,
            if diag.reverted { " reverted" } else { "" }
        );
        metrics.push(row);
        diagnostics.push(diag);
    }

    let best_policy = match best.params {
        Some(p) => QuestionerPolicy::from_params(p)?,
        None => start,
    };
    Ok(TrainOutcome {
        metrics,
        diagnostics,
        best: best_policy,
        best_val: best.score,
        saved_scores: best.saved,
        last: policy,
        outside_region_applied: outside_total,
    })
}

fn absorb(diag: &mut EpochDiagnostics, s: &PassStats) {
    diag.accepted += s.accepted;
    diag.evaluated += s.evaluated;
    diag.outside_region_applied += s.outside_region_applied;
    diag.skipped_nonfinite += s.skipped_nonfinite;
    diag.mean_log_weight += s.mean_log_weight;
    diag.max_abs_log_weight = diag.max_abs_log_weight.max(s.max_abs_log_weight);
    diag.mean_js += s.mean_js;
}
