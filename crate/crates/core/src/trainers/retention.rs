use rand::seq::SliceRandom;
use rand::Rng;

use super::importance::{importance_weight, js_divergence, ImportanceWeight, TrustRegion};
use super::memory::MemoryBuffer;
use super::update::{weighted_step, StepOutcome};
use crate::nn::Optimizer;
use crate::policy::QuestionerPolicy;

/// Numeric ceiling on `|ln ω|` used when scaling a gradient. It only binds
/// when a bound is switched off; with both bounds on, `ln ω_max` is far
/// smaller.
pub const MAX_LOG_WEIGHT: f64 = 18.420680743952367; // ln 1e8

#[derive(Clone, Copy, Debug)]
pub struct RetentionConfig {
    pub region: TrustRegion,
    pub prob_update: bool,
    pub clip_norm: f64,
    pub shuffle: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PassStats {
    pub evaluated: usize,
    pub accepted: usize,
    pub skipped_nonfinite: usize,
    /// Applied steps whose `ω` lay outside `[1/ω_max, ω_max]`. Always zero
    /// when both bounds are enforced.
    pub outside_region_applied: usize,
    pub mean_log_weight: f64,
    pub max_abs_log_weight: f64,
    /// Mean per-action JS divergence between `[p, 1−p]` and `[q, 1−q]`.
    pub mean_js: f64,
    /// `ln ω` of every entry in visiting order.
    pub log_weights: Vec<f64>,
}

impl PassStats {
    pub fn reuse_ratio(&self) -> f64 {
        if self.evaluated == 0 {
            0.0
        } else {
            self.accepted as f64 / self.evaluated as f64
        }
    }
}

/// One sequential sweep over the memory. Each entry is rescored under the
/// current parameters; with probability updating on, the fresh
/// probabilities overwrite the stored ones before the trust-region test.
/// Accepted entries get an `ω`-weighted step with advantage `r − b`.
pub fn retention_pass<R: Rng + ?Sized>(
    policy: &mut QuestionerPolicy,
    memory: &mut MemoryBuffer,
    cfg: &RetentionConfig,
    baseline: f64,
    opt: &mut Optimizer,
    rng: &mut R,
) -> PassStats {
    let mut order: Vec<usize> = (0..memory.len()).collect();
    if cfg.shuffle {
        order.shuffle(rng);
    }
    let mut stats = PassStats::default();
    let mut js_sum = 0.0;
    let mut js_count = 0usize;
    for idx in order {
        let entry = &mut memory.entries_mut()[idx];
        let scored = policy.score(&entry.grid, &entry.tokens, &entry.action_mask);
        let q = if cfg.prob_update {
            std::mem::replace(&mut entry.stored_log_probs, scored.log_probs.clone())
        } else {
            entry.stored_log_probs.clone()
        };
        let w = importance_weight(&scored.log_probs, &q)
            .expect("memory entry rescored with a different action count");
        for (&lp, &lq) in scored.log_probs.iter().zip(&q) {
            let (p, q) = (lp.exp(), lq.exp());
            if let Ok(js) = js_divergence(&[p, 1.0 - p], &[q, 1.0 - q]) {
                js_sum += js;
                js_count += 1;
            }
        }
        stats.evaluated += 1;
        stats.log_weights.push(w.log);
        if w.log.is_finite() {
            stats.mean_log_weight += w.log;
            stats.max_abs_log_weight = stats.max_abs_log_weight.max(w.log.abs());
        }
        if !cfg.region.accepts(w) {
            continue;
        }
        stats.accepted += 1;
        let weight = ImportanceWeight {
            log: w.log.clamp(-MAX_LOG_WEIGHT, MAX_LOG_WEIGHT),
        }
        .value();
        let advantage = entry.reward - baseline;
        match weighted_step(policy, &scored, advantage, weight, cfg.clip_norm, opt) {
            StepOutcome::Applied { .. } => {
                if !cfg.region.contains(w) {
                    stats.outside_region_applied += 1;
                }
            }
            StepOutcome::SkippedNonFinite => stats.skipped_nonfinite += 1,
        }
    }
    if stats.evaluated > 0 {
        stats.mean_log_weight /= stats.evaluated as f64;
    }
    if js_count > 0 {
        stats.mean_js = js_sum / js_count as f64;
    }
    stats
}
