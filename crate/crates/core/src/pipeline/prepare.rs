//! Data preparation: drop records missing a selected driver, then drop
//! effort outliers with a single IQR fence on log effort.

use super::drivers::DriverSpec;
use crate::dataio::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PrepareConfig {
    /// Fence multiplier m in [Q1 − m·IQR, Q3 + m·IQR].
    pub fence_multiplier: f64,
}

impl Default for PrepareConfig {
    fn default() -> Self {
        PrepareConfig { fence_multiplier: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PreparationReport {
    pub input: usize,
    pub dropped_missing: Vec<String>,
    pub dropped_outlier: Vec<String>,
    pub retained: usize,
    /// Fence on ln(effort) applied in the outlier step.
    pub log_fence: Option<(f64, f64)>,
}

/// Linear-interpolation quantile of sorted data (position q·(n − 1)).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn prepare(dataset: &Dataset, drivers: &[DriverSpec], config: &PrepareConfig) -> Result<(Dataset, PreparationReport)> {
    if !(config.fence_multiplier.is_finite() && config.fence_multiplier >= 0.0) {
        return Err(Error::invalid(
            "fence_multiplier",
            format!("{} must be non-negative", config.fence_multiplier),
        ));
    }
    if dataset.is_empty() {
        return Err(Error::InsufficientData("empty dataset".into()));
    }
    let mut report = PreparationReport {
        input: dataset.len(),
        ..Default::default()
    };

    let complete = dataset.filter(|r| {
        let ok = drivers.iter().all(|d| r.has(d.column));
        if !ok {
            report.dropped_missing.push(r.project_id.clone());
        }
        ok
    });

    let prepared = if complete.is_empty() {
        complete
    } else {
        let mut logs: Vec<f64> = complete.records().iter().map(|r| r.effort.ln()).collect();
        logs.sort_by(f64::total_cmp);
        let q1 = quantile_sorted(&logs, 0.25);
        let q3 = quantile_sorted(&logs, 0.75);
        let iqr = q3 - q1;
        let (lo, hi) = (q1 - config.fence_multiplier * iqr, q3 + config.fence_multiplier * iqr);
        report.log_fence = Some((lo, hi));
        complete.filter(|r| {
            let l = r.effort.ln();
            let ok = l >= lo && l <= hi;
            if !ok {
                report.dropped_outlier.push(r.project_id.clone());
            }
            ok
        })
    };

    report.retained = prepared.len();
    if prepared.is_empty() {
        return Err(Error::InsufficientData(format!(
            "all {} records dropped during preparation",
            report.input
        )));
    }
    Ok((prepared, report))
}
