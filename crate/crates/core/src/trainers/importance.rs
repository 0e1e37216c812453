//! Trajectory importance weights, the trust region over them, and the
//! Jensen-Shannon diagnostic.

use crate::error::{Error, Result};

/// `ω = Π p_t / Π q_t`, carried as `ln ω` so long trajectories cannot
/// overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImportanceWeight {
    pub log: f64,
}

impl ImportanceWeight {
    pub fn value(&self) -> f64 {
        self.log.exp()
    }
}

/// Importance weight from per-action log-probabilities under the target
/// policy (`log_p`) and the behavior policy that generated the actions
/// (`log_q`).
pub fn importance_weight(log_p: &[f64], log_q: &[f64]) -> Result<ImportanceWeight> {
    if log_p.len() != log_q.len() {
        return Err(Error::LengthMismatch {
            left: log_p.len(),
            right: log_q.len(),
        });
    }
    let log = log_p.iter().sum::<f64>() - log_q.iter().sum::<f64>();
    Ok(ImportanceWeight { log })
}

/// Closed interval `[1/ω_max, ω_max]`, either side of which can be disabled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrustRegion {
    log_max: f64,
    pub upper: bool,
    pub lower: bool,
}

impl TrustRegion {
    pub fn new(omega_max: f64, upper: bool, lower: bool) -> Self {
        assert!(omega_max >= 1.0, "omega_max must be >= 1");
        TrustRegion {
            log_max: omega_max.ln(),
            upper,
            lower,
        }
    }

    pub fn log_max(&self) -> f64 {
        self.log_max
    }

    /// NaN weights are never accepted.
    pub fn accepts(&self, w: ImportanceWeight) -> bool {
        if w.log.is_nan() {
            return false;
        }
        (!self.upper || w.log <= self.log_max) && (!self.lower || w.log >= -self.log_max)
    }

    /// Whether `w` lies inside the full two-sided interval, regardless of
    /// which bounds are enforced.
    pub fn contains(&self, w: ImportanceWeight) -> bool {
        w.log.abs() <= self.log_max
    }
}

/// Two-sided check `1/ω_max ≤ ω ≤ ω_max`, evaluated on `ln ω`.
pub fn trust_region_check(omega: f64, omega_max: f64) -> bool {
    assert!(omega > 0.0 && omega_max >= 1.0);
    TrustRegion::new(omega_max, true, true).accepts(ImportanceWeight { log: omega.ln() })
}

fn kl_term(a: f64, m: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * (a / m).ln()
    }
}

/// `0.5·KL(p‖m) + 0.5·KL(q‖m)` with `m = (p+q)/2`, natural log.
pub fn js_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::SupportMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let js = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let m = 0.5 * (a + b);
            0.5 * kl_term(a, m) + 0.5 * kl_term(b, m)
        })
        .sum::<f64>();
    Ok(js.max(0.0))
}
