use std::fmt;
use std::str::FromStr;

use super::matrix::{Matrix, ParamStore};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "sgd" => Ok(OptimizerKind::Sgd),
            "adam" => Ok(OptimizerKind::Adam),
            other => Err(Error::ConfigInvalid(format!(
                "unknown optimizer `{other}` (sgd|adam)"
            ))),
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimizerKind::Sgd => "sgd",
            OptimizerKind::Adam => "adam",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AdamState {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<Matrix>,
    v: Vec<Matrix>,
}

impl AdamState {
    fn for_store(store: &ParamStore) -> Self {
        let zeros = |s: &ParamStore| -> Vec<Matrix> {
            s.ids()
                .map(|id| {
                    let (r, c) = s.value(id).shape();
                    Matrix::zeros(r, c)
                })
                .collect()
        };
        AdamState {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: zeros(store),
            v: zeros(store),
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// Descent on the gradients held in a [`ParamStore`]; gradients are zeroed
/// after every step.
#[derive(Clone, Debug)]
pub struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    adam: Option<AdamState>,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, lr: f64, store: &ParamStore) -> Self {
        let adam = (kind == OptimizerKind::Adam).then(|| AdamState::for_store(store));
        Optimizer { kind, lr, adam }
    }

    pub fn sgd(lr: f64) -> Self {
        Optimizer {
            kind: OptimizerKind::Sgd,
            lr,
            adam: None,
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn lr(&self) -> f64 {
        self.lr
    }

    pub fn adam_state(&self) -> Option<&AdamState> {
        self.adam.as_ref()
    }

    pub fn step(&mut self, store: &mut ParamStore) {
        match &mut self.adam {
            None => {
                for id in store.ids() {
                    let (value, grad) = store.value_mut_and_grad(id);
                    for (p, g) in value.as_mut_slice().iter_mut().zip(grad.as_slice()) {
                        *p -= self.lr * g;
                    }
                }
            }
            Some(adam) => {
                assert_eq!(
                    adam.m.len(),
                    store.len(),
                    "optimizer built for another store"
                );
                adam.step += 1;
                let t = adam.step as i32;
                let bc1 = 1.0 - adam.beta1.powi(t);
                let bc2 = 1.0 - adam.beta2.powi(t);
                for (k, id) in store.ids().enumerate() {
                    let (value, grad) = store.value_mut_and_grad(id);
                    let m = adam.m[k].as_mut_slice();
                    let v = adam.v[k].as_mut_slice();
                    for (j, p) in value.as_mut_slice().iter_mut().enumerate() {
                        let g = grad.as_slice()[j];
                        m[j] = adam.beta1 * m[j] + (1.0 - adam.beta1) * g;
                        v[j] = adam.beta2 * v[j] + (1.0 - adam.beta2) * g * g;
                        let m_hat = m[j] / bc1;
                        let v_hat = v[j] / bc2;
                        *p -= self.lr * m_hat / (v_hat.sqrt() + adam.eps);
                    }
                }
            }
        }
        store.zero_grad();
    }
}

/// Rescales gradients so their global norm is at most `max_norm` and returns
/// the multiplier that was applied (1 when no clipping was needed).
pub fn clip_factor(store: &ParamStore, max_norm: f64) -> f64 {
    let norm = store.grad_norm();
    if norm > max_norm {
        max_norm / norm
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_store(p: f64, g: f64) -> ParamStore {
        let mut s = ParamStore::new();
        let id = s.add("p", Matrix::new(1, 1, vec![p]).unwrap());
        s.grad_mut(id).set(0, 0, g);
        s
    }

    #[test]
    fn sgd_arithmetic() {
        let mut s = scalar_store(1.0, 2.0);
        Optimizer::sgd(0.1).step(&mut s);
        let id = s.id("p").unwrap();
        assert!((s.value(id).get(0, 0) - 0.8).abs() < 1e-15);
        assert_eq!(s.grad(id).get(0, 0), 0.0);
    }

    #[test]
    fn zero_gradients_leave_parameters() {
        for kind in [OptimizerKind::Sgd, OptimizerKind::Adam] {
            let mut s = scalar_store(0.7, 0.0);
            let before = s.clone();
            let mut opt = Optimizer::new(kind, 0.01, &s);
            opt.step(&mut s);
            assert!(s.same_values(&before), "{kind}");
        }
    }

    #[test]
    fn adam_first_step_has_magnitude_lr() {
        for g in [1e-3, 1.0, 1e3] {
            let mut s = scalar_store(0.0, g);
            let mut opt = Optimizer::new(OptimizerKind::Adam, 0.01, &s);
            opt.step(&mut s);
            let moved = s.value(s.id("p").unwrap()).get(0, 0).abs();
            assert!((moved - 0.01).abs() < 1e-6, "g={g} moved {moved}");
        }
    }

    #[test]
    fn clip_factor_caps_norm() {
        let s = scalar_store(0.0, 10.0);
        assert!((clip_factor(&s, 5.0) - 0.5).abs() < 1e-15);
        assert_eq!(clip_factor(&s, 50.0), 1.0);
    }
}
