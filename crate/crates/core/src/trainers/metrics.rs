use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row of the metrics CSV. Column order follows field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    /// Cumulative training rollouts.
    pub env_samples: u64,
    pub train_success: f64,
    pub val_success: f64,
    pub memory_size: usize,
    pub retention_passes: usize,
    pub reuse_ratio: f64,
    pub wall_ms: u64,
}

/// Per-epoch numbers that are logged but not part of the CSV contract.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EpochDiagnostics {
    pub baseline: f64,
    pub post_rollout_val: f64,
    pub reverted: bool,
    pub accepted: usize,
    pub evaluated: usize,
    pub outside_region_applied: usize,
    pub skipped_nonfinite: usize,
    pub mean_log_weight: f64,
    pub max_abs_log_weight: f64,
    pub mean_js: f64,
}

pub fn metrics_to_csv(rows: &[EpochMetrics]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record([
        "epoch",
        "env_samples",
        "train_success",
        "val_success",
        "memory_size",
        "retention_passes",
        "reuse_ratio",
        "wall_ms",
    ])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| Error::TrainingFailed(format!("csv buffer: {e}")))
}

pub fn write_metrics(path: &Path, rows: &[EpochMetrics]) -> Result<()> {
    let bytes = metrics_to_csv(rows)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_metrics(path: &Path) -> Result<Vec<EpochMetrics>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_round_trip() {
        let rows = vec![EpochMetrics {
            epoch: 1,
            env_samples: 1500,
            train_success: 0.5,
            val_success: 0.625,
            memory_size: 750,
            retention_passes: 3,
            reuse_ratio: 0.75,
            wall_ms: 0,
        }];
        let text = String::from_utf8(metrics_to_csv(&rows).unwrap()).unwrap();
        assert!(text.starts_with(
            "epoch,env_samples,train_success,val_success,memory_size,retention_passes,reuse_ratio,wall_ms\n"
        ));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        write_metrics(&p, &rows).unwrap();
        assert_eq!(read_metrics(&p).unwrap(), rows);
    }
}
