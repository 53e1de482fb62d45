//! Simple estimation baselines that the regression models are compared with.

use crate::error::{Error, Result};

/// Effort inflated by a risk factor; a factor of 1 means no risk.
pub fn risk_factor_adjust(effort: f64, factor: f64) -> Result<f64> {
    if !(effort.is_finite() && effort > 0.0) {
        return Err(Error::invalid("effort", format!("{effort} must be positive")));
    }
    if !(factor.is_finite() && factor >= 1.0) {
        return Err(Error::invalid("risk factor", format!("{factor} must be at least 1")));
    }
    Ok(effort * factor)
}

/// Functional size times a productivity rate (effort per size unit).
pub fn productivity_estimate(size: f64, productivity: f64) -> Result<f64> {
    if !(size.is_finite() && size > 0.0) {
        return Err(Error::invalid("size", format!("{size} must be positive")));
    }
    if !(productivity.is_finite() && productivity > 0.0) {
        return Err(Error::invalid("productivity", format!("{productivity} must be positive")));
    }
    Ok(size * productivity)
}
