//! Learning procedures: MLE pretraining, REINFORCE with a running baseline,
//! the positive memory, bounded importance-weighted retention, the epoch
//! loop, evaluation, and an importance-sampling oracle on a micro-MDP.

pub mod baseline;
pub mod config;
pub mod eval;
pub mod importance;
pub mod is_oracle;
pub mod memory;
pub mod metrics;
pub mod pmr;
pub mod pretrain;
pub mod retention;
pub mod update;

pub use baseline::{BaselineEma, DEFAULT_BASELINE_DECAY};
pub use config::{Toggles, TrainConfig};
pub use eval::{evaluate, Evaluator};
pub use importance::{
    importance_weight, js_divergence, trust_region_check, ImportanceWeight, TrustRegion,
};
pub use is_oracle::{
    exact_return, is_estimate, is_return_oracle, IsEstimate, MicroMdp, OracleReport,
    PositiveProposal, TabularPolicy, MAX_ENUMERATION,
};
pub use memory::{MemoryBuffer, MemoryEntry};
pub use metrics::{metrics_to_csv, read_metrics, write_metrics, EpochDiagnostics, EpochMetrics};
pub use pmr::{train, TrainOutcome};
pub use pretrain::{perplexity, pretrain, PretrainConfig, PretrainEpoch, PretrainOutcome};
pub use retention::{retention_pass, PassStats, RetentionConfig, MAX_LOG_WEIGHT};
pub use update::{reinforce_update, weighted_step, StepOutcome};
