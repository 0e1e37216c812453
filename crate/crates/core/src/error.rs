use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: expected {expected}, got {actual}")]
    ShapeMismatch {
        op: &'static str,
        expected: String,
        actual: String,
    },

    #[error("degenerate distribution: probabilities sum to {sum}")]
    DegenerateDistribution { sum: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("support mismatch: {left} vs {right}")]
    SupportMismatch { left: usize, right: usize },

    #[error("scripted game exceeded {max_rounds} rounds")]
    GameTooLong { max_rounds: usize },

    #[error("grid has indistinguishable cells; no scripted game can isolate the target")]
    Unsolvable,

    #[error("micro-MDP has {count} trajectories, more than the enumeration limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("dataset not found: {}", .0.display())]
    MissingDataset(PathBuf),

    #[error("checkpoint not found: {}", .0.display())]
    MissingCheckpoint(PathBuf),

    #[error("{}:{line}: corrupt record: {msg}", .path.display())]
    CorruptRecord {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("malformed checkpoint at line {line}: {msg}")]
    CorruptCheckpoint { line: usize, msg: String },

    #[error("training failed: {0}")]
    TrainingFailed(String),

    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn shape(op: &'static str, expected: impl ToString, actual: impl ToString) -> Self {
        Error::ShapeMismatch {
            op,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigInvalid(_) => 1,
            Error::Io { .. }
            | Error::Csv(_)
            | Error::MissingDataset(_)
            | Error::MissingCheckpoint(_)
            | Error::CorruptRecord { .. }
            | Error::CorruptCheckpoint { .. } => 2,
            _ => 3,
        }
    }
}
