use crate::nn::{clip_factor, Optimizer, Parameterized};
use crate::policy::{QuestionerPolicy, Scored, Trajectory};

/// What happened to the gradient of one policy-gradient step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepOutcome {
    Applied {
        grad_norm: f64,
    },
    /// The raw gradient contained NaN or infinities; nothing was changed.
    SkippedNonFinite,
}

/// Shared ascent step on `−weight·advantage·Σ log p_t`.
///
/// The unweighted gradient is clipped to `clip_norm` first and the weight is
/// applied afterwards, so at `weight = 1` this is exactly a REINFORCE step.
pub fn weighted_step(
    policy: &mut QuestionerPolicy,
    scored: &Scored,
    advantage: f64,
    weight: f64,
    clip_norm: f64,
    opt: &mut Optimizer,
) -> StepOutcome {
    policy.params_mut().zero_grad();
    policy.backward(&scored.tape, advantage);
    let store = policy.params_mut();
    if !store.grads_finite() {
        store.zero_grad();
        return StepOutcome::SkippedNonFinite;
    }
    let grad_norm = store.grad_norm();
    let factor = clip_factor(store, clip_norm) * weight;
    if factor != 1.0 {
        store.scale_grads(factor);
    }
    opt.step(store);
    StepOutcome::Applied { grad_norm }
}

/// One on-policy REINFORCE step with baseline `b` on a fresh trajectory.
pub fn reinforce_update(
    policy: &mut QuestionerPolicy,
    traj: &Trajectory,
    baseline: f64,
    clip_norm: f64,
    opt: &mut Optimizer,
) -> StepOutcome {
    let scored = policy.score_trajectory(traj);
    weighted_step(policy, &scored, traj.reward - baseline, 1.0, clip_norm, opt)
}
