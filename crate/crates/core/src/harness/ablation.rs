use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::trainers::{EpochMetrics, Toggles};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AblationRow {
    pub id: usize,
    pub toggles: Toggles,
    pub omega_max: f64,
}

pub const SWEEP_OMEGAS: [f64; 6] = [1.0, 5.0, 10.0, 20.0, 30.0, 100.0];
pub const DEFAULT_OMEGA: f64 = 10.0;

const fn t(rf: bool, is: bool, pm: bool, ub: bool, lb: bool, pb: bool, es: bool) -> Toggles {
    Toggles {
        rf,
        is,
        pm,
        ub,
        lb,
        pb,
        es,
    }
}

/// The nine component rows followed by the six `ω_max` sweep rows.
pub fn ablation_rows() -> Vec<AblationRow> {
    let upper = [
        t(false, false, false, false, false, false, false),
        t(true, false, false, false, false, false, false),
        t(true, true, false, false, false, false, false),
        t(true, true, true, false, false, false, false),
        t(true, true, false, true, false, false, false),
        t(true, true, false, true, true, false, false),
        t(true, true, true, true, true, false, false),
        t(true, true, true, true, true, true, false),
        Toggles::ALL,
    ];
    let mut rows: Vec<AblationRow> = upper
        .iter()
        .enumerate()
        .map(|(i, &toggles)| AblationRow {
            id: i + 1,
            toggles,
            omega_max: DEFAULT_OMEGA,
        })
        .collect();
    for (i, &omega_max) in SWEEP_OMEGAS.iter().enumerate() {
        rows.push(AblationRow {
            id: 10 + i,
            toggles: Toggles::ALL,
            omega_max,
        });
    }
    rows
}

/// Rows whose ids are listed, in table order.
pub fn select_rows(ids: &[usize]) -> Result<Vec<AblationRow>> {
    let all = ablation_rows();
    for id in ids {
        if !all.iter().any(|r| r.id == *id) {
            return Err(Error::ConfigInvalid(format!("no ablation row {id}")));
        }
    }
    Ok(all.into_iter().filter(|r| ids.contains(&r.id)).collect())
}

#[derive(Clone, Debug)]
pub struct RowOutcome {
    pub test_success: f64,
    pub best_val: Option<f64>,
    pub metrics: Vec<EpochMetrics>,
    pub outside_region_applied: usize,
}

#[derive(Clone, Debug)]
pub struct AblationResult {
    pub row: AblationRow,
    pub outcome: std::result::Result<RowOutcome, String>,
}

#[derive(Clone, Debug)]
pub struct AblationReport {
    pub pretrained_val: f64,
    pub pretrained_test: f64,
    pub results: Vec<AblationResult>,
}

impl AblationReport {
    pub fn result(&self, id: usize) -> Option<&AblationResult> {
        self.results.iter().find(|r| r.row.id == id)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["row_id", "toggles", "omega_max", "test_success"])?;
        for r in &self.results {
            let score = match &r.outcome {
                Ok(o) => format!("{:?}", o.test_success),
                Err(_) => "failed".to_string(),
            };
            w.write_record([
                r.row.id.to_string(),
                r.row.toggles.to_string(),
                format!("{:?}", r.row.omega_max),
                score,
            ])?;
        }
        w.into_inner()
            .map_err(|e| Error::TrainingFailed(format!("csv buffer: {e}")))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3}  {:<22} {:>8}  {:>9}",
            "#", "toggles", "omega", "test (%)"
        );
        for r in &self.results {
            let score = match &r.outcome {
                Ok(o) => format!("{:.2}", 100.0 * o.test_success),
                Err(e) => format!("failed: {e}"),
            };
            let _ = writeln!(
                out,
                "{:>3}  {:<22} {:>8}  {:>9}",
                r.row.id,
                r.row.toggles.to_string(),
                r.row.omega_max,
                score
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let rows = ablation_rows();
        assert_eq!(rows.len(), 15);
        assert_eq!(rows[0].toggles, Toggles::NONE);
        assert_eq!(rows[1].toggles, Toggles::REINFORCE);
        assert_eq!(rows[2].toggles.to_string(), "RF+IS");
        assert_eq!(rows[3].toggles.to_string(), "RF+IS+PM");
        assert_eq!(rows[4].toggles.to_string(), "RF+IS+UB");
        assert_eq!(rows[6].toggles.to_string(), "RF+IS+PM+UB+LB");
        let omegas: Vec<f64> = rows[9..].iter().map(|r| r.omega_max).collect();
        assert_eq!(omegas, SWEEP_OMEGAS);
        assert!(rows.iter().all(|r| r.toggles.validate().is_ok()));
        assert_eq!(
            select_rows(&[12, 3])
                .unwrap()
                .iter()
                .map(|r| r.id)
                .collect::<Vec<_>>(),
            vec![3, 12]
        );
        assert!(select_rows(&[16]).is_err());
    }
}
