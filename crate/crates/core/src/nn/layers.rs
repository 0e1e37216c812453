//! Forward and backward kernels for the layers the questioner is built from.

use super::matrix::Matrix;
use crate::error::{Error, Result};

fn check_affine(op: &'static str, w: &Matrix, b: &[f64], x: &[f64]) -> Result<()> {
    if x.len() != w.cols() {
        return Err(Error::shape(op, format!("input of {}", w.cols()), x.len()));
    }
    if b.len() != w.rows() {
        return Err(Error::shape(op, format!("bias of {}", w.rows()), b.len()));
    }
    Ok(())
}

/// `W·input + b`.
pub fn linear(input: &[f64], w: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    check_affine("linear", w, b, input)?;
    let mut out = vec![0.0; w.rows()];
    w.affine_into(input, b, &mut out);
    Ok(out)
}

/// Accumulates `∂L/∂W` and `∂L/∂b` and returns `∂L/∂input`.
pub fn linear_backward(
    input: &[f64],
    w: &Matrix,
    dout: &[f64],
    dw: &mut Matrix,
    db: &mut [f64],
) -> Result<Vec<f64>> {
    check_affine("linear_backward", w, db, input)?;
    if dout.len() != w.rows() || dw.shape() != w.shape() {
        return Err(Error::shape(
            "linear_backward",
            format!("dout {} / dW {:?}", w.rows(), w.shape()),
            format!("dout {} / dW {:?}", dout.len(), dw.shape()),
        ));
    }
    dw.add_outer(dout, input);
    for (d, g) in db.iter_mut().zip(dout) {
        *d += g;
    }
    let mut dx = vec![0.0; input.len()];
    w.add_transpose_mul(dout, &mut dx);
    Ok(dx)
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Max-subtracted log-softmax.
pub fn log_softmax(logits: &[f64]) -> Vec<f64> {
    assert!(!logits.is_empty(), "log_softmax of empty vector");
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logits.iter().map(|&v| (v - max).exp()).sum();
    let log_z = max + sum.ln();
    logits.iter().map(|&v| v - log_z).collect()
}

/// Activations of one LSTM step kept for the backward pass.
#[derive(Clone, Debug)]
pub struct LstmCache {
    /// `[x_t; h_prev]`
    z: Vec<f64>,
    /// Post-activation gates, laid out `i | f | o | g`.
    gates: Vec<f64>,
    c_prev: Vec<f64>,
    tanh_c: Vec<f64>,
}

/// Gate weights are stacked `i | f | o | g` over `[x_t; h_prev]`, so `w` is
/// `4H × (X+H)` and `b` has `4H` entries.
#[derive(Clone, Copy, Debug)]
pub struct LstmShape {
    pub input: usize,
    pub hidden: usize,
}

impl LstmShape {
    fn check(&self, w: &Matrix, b: &[f64]) -> Result<()> {
        let want = (4 * self.hidden, self.input + self.hidden);
        if w.shape() != want || b.len() != want.0 {
            return Err(Error::shape(
                "lstm_step",
                format!("W {want:?}, b {}", want.0),
                format!("W {:?}, b {}", w.shape(), b.len()),
            ));
        }
        Ok(())
    }
}

/// One LSTM step:
/// `i,f,o = σ(W·[x;h]+b)`, `g = tanh(·)`, `c = f⊙c_prev + i⊙g`, `h = o⊙tanh(c)`.
pub fn lstm_step(
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    w: &Matrix,
    b: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, LstmCache)> {
    let shape = LstmShape {
        input: x.len(),
        hidden: h_prev.len(),
    };
    shape.check(w, b)?;
    if c_prev.len() != shape.hidden {
        return Err(Error::shape("lstm_step", shape.hidden, c_prev.len()));
    }
    Ok(lstm_step_unchecked(x, h_prev, c_prev, w, b))
}

pub(crate) fn lstm_step_unchecked(
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    w: &Matrix,
    b: &[f64],
) -> (Vec<f64>, Vec<f64>, LstmCache) {
    let hidden = h_prev.len();
    let mut z = Vec::with_capacity(x.len() + hidden);
    z.extend_from_slice(x);
    z.extend_from_slice(h_prev);
    let mut gates = vec![0.0; 4 * hidden];
    w.affine_into(&z, b, &mut gates);
    for v in &mut gates[..3 * hidden] {
        *v = sigmoid(*v);
    }
    for v in &mut gates[3 * hidden..] {
        *v = v.tanh();
    }
    let mut c = vec![0.0; hidden];
    let mut h = vec![0.0; hidden];
    let mut tanh_c = vec![0.0; hidden];
    for k in 0..hidden {
        let (i, f, o, g) = (
            gates[k],
            gates[hidden + k],
            gates[2 * hidden + k],
            gates[3 * hidden + k],
        );
        c[k] = f * c_prev[k] + i * g;
        tanh_c[k] = c[k].tanh();
        h[k] = o * tanh_c[k];
    }
    let cache = LstmCache {
        z,
        gates,
        c_prev: c_prev.to_vec(),
        tanh_c,
    };
    (h, c, cache)
}

/// Gradients flowing out of one LSTM step.
#[derive(Clone, Debug)]
pub struct LstmGrads {
    pub dx: Vec<f64>,
    pub dh_prev: Vec<f64>,
    pub dc_prev: Vec<f64>,
}

/// Back-propagates `∂L/∂h_t` and `∂L/∂c_t` through one step, accumulating
/// into `dw`/`db`.
pub fn lstm_step_backward(
    cache: &LstmCache,
    w: &Matrix,
    dh: &[f64],
    dc: &[f64],
    dw: &mut Matrix,
    db: &mut [f64],
) -> LstmGrads {
    let hidden = cache.c_prev.len();
    debug_assert_eq!(dh.len(), hidden);
    debug_assert_eq!(dw.shape(), w.shape());
    let g = &cache.gates;
    let mut dpre = vec![0.0; 4 * hidden];
    let mut dc_prev = vec![0.0; hidden];
    for k in 0..hidden {
        let (i, f, o, gg) = (g[k], g[hidden + k], g[2 * hidden + k], g[3 * hidden + k]);
        let tc = cache.tanh_c[k];
        let dct = dc[k] + dh[k] * o * (1.0 - tc * tc);
        let d_o = dh[k] * tc;
        let d_i = dct * gg;
        let d_f = dct * cache.c_prev[k];
        let d_g = dct * i;
        dc_prev[k] = dct * f;
        dpre[k] = d_i * i * (1.0 - i);
        dpre[hidden + k] = d_f * f * (1.0 - f);
        dpre[2 * hidden + k] = d_o * o * (1.0 - o);
        dpre[3 * hidden + k] = d_g * (1.0 - gg * gg);
    }
    dw.add_outer(&dpre, &cache.z);
    for (d, p) in db.iter_mut().zip(&dpre) {
        *d += p;
    }
    let mut dz = vec![0.0; cache.z.len()];
    w.add_transpose_mul(&dpre, &mut dz);
    let dh_prev = dz.split_off(cache.z.len() - hidden);
    LstmGrads {
        dx: dz,
        dh_prev,
        dc_prev,
    }
}
