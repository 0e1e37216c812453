/// Exponential running average of episode rewards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineEma {
    value: f64,
    decay: f64,
}

pub const DEFAULT_BASELINE_DECAY: f64 = 0.99;

impl BaselineEma {
    pub fn new(initial: f64, decay: f64) -> Self {
        assert!((0.0..1.0).contains(&decay), "decay must lie in [0, 1)");
        BaselineEma {
            value: initial,
            decay,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// `b ← decay·b + (1 − decay)·r`.
    pub fn update(&mut self, reward: f64) -> f64 {
        self.value = self.decay * self.value + (1.0 - self.decay) * reward;
        self.value
    }
}
