use rand::Rng;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Inverse-CDF draw over `probs` in index order.
pub fn sample_categorical<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    let sum: f64 = probs.iter().sum();
    if probs.is_empty() || probs.iter().any(|p| *p < 0.0) || (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::DegenerateDistribution { sum });
    }
    let u: f64 = rng.gen();
    let mut cum = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            return Ok(i);
        }
    }
    // u landed in the rounding gap above the cumulative sum
    Ok(probs.iter().rposition(|p| *p > 0.0).unwrap_or(0))
}
