//! Positive memory retention for a recurrent question-asking agent.
//!
//! The crate is organised bottom-up:
//!
//! * [`env`]: the symbolic GuessNumber game and its datasets.
//! * [`nn`]: dense kernels with hand-written backward passes.
//! * [`policy`]: the LSTM questioner, rollouts and teacher-forced scoring.
//! * [`trainers`]: MLE pretraining, REINFORCE, bounded importance-weighted
//!   retention and the epoch loop that ties them together.
//! * [`harness`]: configuration, the ablation table and command entry points.

pub mod env;
pub mod error;
pub mod harness;
pub mod nn;
pub mod policy;
pub mod trainers;

pub use error::{Error, Result};
