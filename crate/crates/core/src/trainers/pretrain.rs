use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::eval::Evaluator;
use crate::env::GameRecord;
use crate::error::{Error, Result};
use crate::nn::{clip_factor, Optimizer, OptimizerKind, Parameterized};
use crate::policy::QuestionerPolicy;

#[derive(Clone, Debug, PartialEq)]
pub struct PretrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub optimizer: OptimizerKind,
    pub clip_norm: f64,
    pub seed: u64,
}

impl Default for PretrainConfig {
    fn default() -> Self {
        PretrainConfig {
            epochs: 5,
            lr: 1e-3,
            optimizer: OptimizerKind::Adam,
            clip_norm: 5.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PretrainEpoch {
    pub epoch: usize,
    pub train_perplexity: f64,
    pub val_perplexity: f64,
    pub val_success: f64,
}

#[derive(Clone, Debug)]
pub struct PretrainOutcome {
    pub epochs: Vec<PretrainEpoch>,
    /// Lowest validation perplexity; the initial parameters when no epoch ran.
    pub best: QuestionerPolicy,
    pub best_epoch: Option<usize>,
}

/// `exp(total NLL / total question tokens)` over a corpus.
pub fn perplexity(policy: &QuestionerPolicy, games: &[GameRecord]) -> f64 {
    let (mut nll, mut n) = (0.0, 0usize);
    for g in games {
        let (l, k) = policy.nll(g);
        nll += l;
        n += k;
    }
    if n == 0 {
        1.0
    } else {
        (nll / n as f64).exp()
    }
}

/// Maximum-likelihood training on scripted dialogs, one update per game in
/// a freshly shuffled order each epoch. The checkpoint with the lowest
/// validation perplexity is kept.
pub fn pretrain(
    mut policy: QuestionerPolicy,
    train: &[GameRecord],
    val: &[GameRecord],
    validator: &Evaluator,
    cfg: &PretrainConfig,
) -> Result<PretrainOutcome> {
    if !(cfg.lr.is_finite() && cfg.lr > 0.0 && cfg.clip_norm > 0.0) {
        return Err(Error::ConfigInvalid(
            "pretrain lr and clip_norm must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut opt = Optimizer::new(cfg.optimizer, cfg.lr, policy.params());
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut epochs = Vec::with_capacity(cfg.epochs);
    let mut best = policy.clone();
    let mut best_ppl = f64::INFINITY;
    let mut best_epoch = None;

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            policy.params_mut().zero_grad();
            policy.mle_loss(&train[i]);
            let store = policy.params_mut();
            if !store.grads_finite() {
                store.zero_grad();
                continue;
            }
            let f = clip_factor(store, cfg.clip_norm);
            if f != 1.0 {
                store.scale_grads(f);
            }
            opt.step(store);
        }
        if !policy.params().values_finite() {
            return Err(Error::TrainingFailed(format!(
                "non-finite parameters after pretraining epoch {epoch}"
            )));
        }
        let row = PretrainEpoch {
            epoch,
            train_perplexity: perplexity(&policy, train),
            val_perplexity: perplexity(&policy, val),
            val_success: validator.success(&policy)?,
        };
        log::info!(
            "pretrain epoch {epoch}: train ppl {:.4} val ppl {:.4} val success {:.4}",
            row.train_perplexity,
            row.val_perplexity,
            row.val_success
        );
        if row.val_perplexity < best_ppl {
            best_ppl = row.val_perplexity;
            best = policy.clone();
            best_epoch = Some(epoch);
        }
        epochs.push(row);
    }
    Ok(PretrainOutcome {
        epochs,
        best,
        best_epoch,
    })
}
