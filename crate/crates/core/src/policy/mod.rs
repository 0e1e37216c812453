//! The recurrent questioner and its rollout/scoring machinery.

pub mod model;
pub mod rollout;
pub mod scripted;
pub mod trajectory;

pub use model::{
    PolicyDims, QuestionerPolicy, RecurrentState, Scored, Tape, TokenPolicy, DEFAULT_EMBED,
    DEFAULT_HIDDEN, PARAM_NAMES,
};
pub use rollout::{rollout, RolloutConfig, DEFAULT_MAX_QLEN};
pub use scripted::{ReplayPolicy, ScriptedQuestioner};
pub use trajectory::{game_stream, Trajectory};
