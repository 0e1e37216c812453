//! Configuration, the ablation table and the command entry points used by
//! the `pmr` binary.

pub mod ablation;
pub mod commands;
pub mod config;

pub use ablation::{
    ablation_rows, select_rows, AblationReport, AblationResult, AblationRow, RowOutcome,
    DEFAULT_OMEGA, SWEEP_OMEGAS,
};
pub use commands::{
    cmd_ablate, cmd_eval, cmd_generate, cmd_pretrain, cmd_train, evaluator, grids, load_policy,
    mode_toggles, run_ablation, save_policy, EvalReport, GenerateReport, PretrainReport, Splits,
    TrainMode, TrainReport,
};
pub use config::{derive_seed, RunConfig, SeedTag, KEYS};
