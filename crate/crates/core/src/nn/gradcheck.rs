//! Central finite-difference verification of analytic gradients.

use rand::seq::index::sample;
use rand::Rng;

use super::matrix::{ParamId, ParamStore};

/// Anything that owns a [`ParamStore`].
pub trait Parameterized {
    fn params(&self) -> &ParamStore;
    fn params_mut(&mut self) -> &mut ParamStore;
}

impl Parameterized for ParamStore {
    fn params(&self) -> &ParamStore {
        self
    }

    fn params_mut(&mut self) -> &mut ParamStore {
        self
    }
}

#[derive(Clone, Debug)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    pub coords_checked: usize,
    /// Parameter name, flat index, analytic and numeric value at the worst coordinate.
    pub worst: Option<(String, usize, f64, f64)>,
}

/// Relative error with the denominator `max(|a|, |n|, 1e-8)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8)
}

/// Compares the gradients already stored in `model` against central
/// differences of `loss`. Checks every coordinate when there are at most
/// `max_coords`, otherwise a uniform sample of `max_coords` of them.
pub fn finite_diff_check<M, F, R>(
    model: &mut M,
    mut loss: F,
    eps: f64,
    max_coords: usize,
    rng: &mut R,
) -> GradCheckReport
where
    M: Parameterized,
    F: FnMut(&M) -> f64,
    R: Rng + ?Sized,
{
    let layout: Vec<(ParamId, usize)> = {
        let store = model.params();
        store.ids().map(|id| (id, store.value(id).len())).collect()
    };
    let total: usize = layout.iter().map(|(_, n)| n).sum();
    let picks: Vec<usize> = if total <= max_coords {
        (0..total).collect()
    } else {
        let mut v = sample(rng, total, max_coords).into_vec();
        v.sort_unstable();
        v
    };

    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        coords_checked: 0,
        worst: None,
    };
    for flat in picks {
        let (id, idx) = locate(&layout, flat);
        let analytic = model.params().grad(id).as_slice()[idx];
        let orig = model.params().value(id).as_slice()[idx];
        model.params_mut().value_mut(id).as_mut_slice()[idx] = orig + eps;
        let plus = loss(model);
        model.params_mut().value_mut(id).as_mut_slice()[idx] = orig - eps;
        let minus = loss(model);
        model.params_mut().value_mut(id).as_mut_slice()[idx] = orig;
        let numeric = (plus - minus) / (2.0 * eps);
        let err = relative_error(analytic, numeric);
        report.coords_checked += 1;
        if err > report.max_rel_error || report.worst.is_none() {
            report.max_rel_error = report.max_rel_error.max(err);
            let name = model.params().name(id).to_string();
            report.worst = Some((name, idx, analytic, numeric));
        }
    }
    report
}

fn locate(layout: &[(ParamId, usize)], mut flat: usize) -> (ParamId, usize) {
    for &(id, n) in layout {
        if flat < n {
            return (id, flat);
        }
        flat -= n;
    }
    unreachable!("flat index beyond parameter count")
}
