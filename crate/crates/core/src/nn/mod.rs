//! Minimal dense numeric kernel: matrices, LSTM and softmax layers with
//! hand-written backward passes, optimizers, checkpoints and a
//! finite-difference gradient checker.

pub mod checkpoint;
pub mod gradcheck;
pub mod layers;
pub mod matrix;
pub mod optim;
pub mod sample;

pub use gradcheck::{finite_diff_check, relative_error, GradCheckReport, Parameterized};
pub use layers::{
    linear, linear_backward, log_softmax, lstm_step, lstm_step_backward, sigmoid, LstmCache,
    LstmGrads,
};
pub use matrix::{Matrix, ParamId, ParamStore};
pub use optim::{clip_factor, AdamState, Optimizer, OptimizerKind};
pub use sample::sample_categorical;

/// Half-width of the uniform initialization range.
pub const INIT_SCALE: f64 = 0.08;
