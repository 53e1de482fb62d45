use crate::error::{Error, Result};
use crate::statcore::correlation;

/// MRE threshold for Pred(0.25).
pub const PRED_LEVEL: f64 = 0.25;

/// Headline accuracy figures for one model on one set of projects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySummary {
    pub n: usize,
    pub mmre: f64,
    pub pred_25: f64,
    /// Squared correlation of actual and estimated effort.
    pub r_squared: f64,
    /// Set when either series has no spread; `r_squared` is then 0.
    pub r_squared_degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub summary: AccuracySummary,
    /// Per-project magnitude of relative error, in input order.
    pub mre: Vec<f64>,
}

impl AccuracyReport {
    pub fn mmre(&self) -> f64 {
        self.summary.mmre
    }

    pub fn pred_25(&self) -> f64 {
        self.summary.pred_25
    }

    pub fn r_squared(&self) -> f64 {
        self.summary.r_squared
    }
}

/// Magnitude of relative error `|actual − estimate| / actual`.
pub fn mre(actual: f64, estimate: f64) -> f64 {
    (actual - estimate).abs() / actual
}

pub fn accuracy_metrics(actuals: &[f64], estimates: &[f64]) -> Result<AccuracyReport> {
    if actuals.len() != estimates.len() {
        return Err(Error::LengthMismatch {
            left: actuals.len(),
            right: estimates.len(),
        });
    }
    if actuals.is_empty() {
        return Err(Error::InsufficientData("no projects to score".into()));
    }
    if let Some(a) = actuals.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(Error::invalid("actual effort", format!("{a} must be positive")));
    }
    if let Some(e) = estimates.iter().find(|e| !e.is_finite()) {
        return Err(Error::invalid("estimate", format!("non-finite value {e}")));
    }
    let mre: Vec<f64> = actuals.iter().zip(estimates).map(|(a, e)| mre(*a, *e)).collect();
    let n = mre.len();
    let mmre = mre.iter().sum::<f64>() / n as f64;
    let pred_25 = mre.iter().filter(|m| **m <= PRED_LEVEL).count() as f64 / n as f64;
    let (r_squared, r_squared_degenerate) = match correlation(actuals, estimates) {
        Some(r) => (r * r, false),
        None => (0.0, true),
    };
    Ok(AccuracyReport {
        summary: AccuracySummary {
            n,
            mmre,
            pred_25,
            r_squared,
            r_squared_degenerate,
        },
        mre,
    })
}
