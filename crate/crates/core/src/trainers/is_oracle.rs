//! Importance-sampled return estimates on a small, fully enumerable MDP.

use rand::Rng;

use crate::error::{Error, Result};
use crate::nn::sample_categorical;

/// Upper limit on the number of trajectories [`MicroMdp`] will enumerate.
pub const MAX_ENUMERATION: u128 = 100_000;

/// A `steps`-step decision problem with `actions` choices per step and a
/// terminal reward for each action sequence. Sequences are indexed as
/// base-`actions` numbers, first action most significant.
#[derive(Clone, Debug)]
pub struct MicroMdp {
    steps: usize,
    actions: usize,
    rewards: Vec<f64>,
}

impl MicroMdp {
    pub fn new(steps: usize, actions: usize, reward: impl Fn(&[usize]) -> f64) -> Result<Self> {
        let count = (actions as u128)
            .checked_pow(steps as u32)
            .unwrap_or(u128::MAX);
        if count > MAX_ENUMERATION {
            return Err(Error::EnumerationTooLarge {
                count,
                limit: MAX_ENUMERATION,
            });
        }
        assert!(steps > 0 && actions > 0);
        let mut mdp = MicroMdp {
            steps,
            actions,
            rewards: Vec::with_capacity(count as usize),
        };
        for code in 0..count as usize {
            let seq = mdp.decode(code);
            mdp.rewards.push(reward(&seq));
        }
        Ok(mdp)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    pub fn num_trajectories(&self) -> usize {
        self.rewards.len()
    }

    pub fn reward(&self, code: usize) -> f64 {
        self.rewards[code]
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut seq = vec![0; self.steps];
        for slot in seq.iter_mut().rev() {
            *slot = code % self.actions;
            code /= self.actions;
        }
        seq
    }

    fn encode(&self, seq: &[usize]) -> usize {
        seq.iter().fold(0, |acc, &a| acc * self.actions + a)
    }
}

/// A policy conditioned on the step and the previous action.
#[derive(Clone, Debug)]
pub struct TabularPolicy {
    actions: usize,
    /// `table[t][prev]` with `prev = actions` at the first step.
    table: Vec<Vec<Vec<f64>>>,
}

impl TabularPolicy {
    pub fn new(mdp: &MicroMdp, dist: impl Fn(usize, Option<usize>) -> Vec<f64>) -> Result<Self> {
        let a = mdp.actions;
        let mut table = Vec::with_capacity(mdp.steps);
        for t in 0..mdp.steps {
            let mut rows = Vec::with_capacity(a + 1);
            for prev in 0..=a {
                let p = dist(t, (prev < a).then_some(prev));
                if p.len() != a {
                    return Err(Error::SupportMismatch {
                        left: p.len(),
                        right: a,
                    });
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > 1e-9 || p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                    return Err(Error::DegenerateDistribution { sum });
                }
                rows.push(p);
            }
            table.push(rows);
        }
        Ok(TabularPolicy { actions: a, table })
    }

    fn row(&self, t: usize, prev: Option<usize>) -> &[f64] {
        &self.table[t][prev.unwrap_or(self.actions)]
    }

    pub fn prob(&self, seq: &[usize]) -> f64 {
        let mut p = 1.0;
        let mut prev = None;
        for (t, &a) in seq.iter().enumerate() {
            p *= self.row(t, prev)[a];
            prev = Some(a);
        }
        p
    }

    pub fn sample<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> Result<Vec<usize>> {
        let mut seq = Vec::with_capacity(steps);
        let mut prev = None;
        for t in 0..steps {
            let a = sample_categorical(self.row(t, prev), rng)?;
            seq.push(a);
            prev = Some(a);
        }
        Ok(seq)
    }
}

/// Exact `J = Σ_τ π(τ) R(τ)`.
pub fn exact_return(mdp: &MicroMdp, policy: &TabularPolicy) -> f64 {
    (0..mdp.num_trajectories())
        .map(|c| policy.prob(&mdp.decode(c)) * mdp.reward(c))
        .sum()
}

#[derive(Clone, Debug)]
pub struct IsEstimate {
    pub estimate: f64,
    /// Sample standard deviation of the per-sample terms `ω·R`.
    pub sample_std: f64,
    pub weights: Vec<f64>,
}

/// `Ĵ = (1/n) Σ ω(τ_i) R(τ_i)` with `τ_i ~ π′` and `ω = π(τ)/π′(τ)`.
pub fn is_estimate<R: Rng + ?Sized>(
    mdp: &MicroMdp,
    target: &TabularPolicy,
    behavior: &TabularPolicy,
    n: usize,
    rng: &mut R,
) -> Result<IsEstimate> {
    let mut terms = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        let seq = behavior.sample(mdp.steps, rng)?;
        let w = target.prob(&seq) / behavior.prob(&seq);
        weights.push(w);
        terms.push(w * mdp.reward(mdp.encode(&seq)));
    }
    let (estimate, sample_std) = mean_std(&terms);
    Ok(IsEstimate {
        estimate,
        sample_std,
        weights,
    })
}

/// Behavior policy restricted to rewarded trajectories:
/// `q(τ) ∝ π′(τ)·[R(τ) > 0]`.
#[derive(Clone, Debug)]
pub struct PositiveProposal {
    codes: Vec<usize>,
    probs: Vec<f64>,
}

impl PositiveProposal {
    pub fn new(mdp: &MicroMdp, behavior: &TabularPolicy) -> Result<Self> {
        let codes: Vec<usize> = (0..mdp.num_trajectories())
            .filter(|&c| mdp.reward(c) > 0.0)
            .collect();
        let raw: Vec<f64> = codes
            .iter()
            .map(|&c| behavior.prob(&mdp.decode(c)))
            .collect();
        let z: f64 = raw.iter().sum();
        if z <= 0.0 {
            return Err(Error::DegenerateDistribution { sum: z });
        }
        Ok(PositiveProposal {
            codes,
            probs: raw.iter().map(|p| p / z).collect(),
        })
    }

    /// Importance-sampled estimate of `J(π)` from `n` draws of `q`.
    pub fn estimate<R: Rng + ?Sized>(
        &self,
        mdp: &MicroMdp,
        target: &TabularPolicy,
        n: usize,
        rng: &mut R,
    ) -> Result<f64> {
        let mut total = 0.0;
        for _ in 0..n {
            let k = sample_categorical(&self.probs, rng)?;
            let c = self.codes[k];
            total += target.prob(&mdp.decode(c)) / self.probs[k] * mdp.reward(c);
        }
        Ok(total / n as f64)
    }
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub exact: f64,
    pub estimate: IsEstimate,
    /// Variance across repetitions of the `n`-sample estimate drawn from π.
    pub on_policy_variance: f64,
    /// The same under the positive-only proposal built from π′.
    pub positive_only_variance: f64,
}

/// Exact return of `target`, one IS estimate from `behavior`, and the
/// spread of repeated on-policy and positive-only estimates.
pub fn is_return_oracle<R: Rng + ?Sized>(
    mdp: &MicroMdp,
    target: &TabularPolicy,
    behavior: &TabularPolicy,
    n: usize,
    repetitions: usize,
    rng: &mut R,
) -> Result<OracleReport> {
    let exact = exact_return(mdp, target);
    let estimate = is_estimate(mdp, target, behavior, n, rng)?;
    let mut on_policy = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        on_policy.push(is_estimate(mdp, target, target, n, rng)?.estimate);
    }
    let proposal = PositiveProposal::new(mdp, behavior)?;
    let mut positive = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        positive.push(proposal.estimate(mdp, target, n, rng)?);
    }
    Ok(OracleReport {
        exact,
        estimate,
        on_policy_variance: mean_std(&on_policy).1.powi(2),
        positive_only_variance: mean_std(&positive).1.powi(2),
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_limit() {
        assert!(MicroMdp::new(5, 10, |_| 0.0).is_ok());
        assert!(matches!(
            MicroMdp::new(6, 10, |_| 0.0),
            Err(Error::EnumerationTooLarge {
                count: 1_000_000,
                ..
            })
        ));
        assert!(MicroMdp::new(200, 3, |_| 0.0).is_err());
    }

    #[test]
    fn decode_is_base_a() {
        let m = MicroMdp::new(2, 3, |s| s[0] as f64).unwrap();
        assert_eq!(m.decode(5), vec![1, 2]);
        assert_eq!(m.encode(&[1, 2]), 5);
        assert_eq!(m.reward(5), 1.0);
    }
}
