use crate::error::{Error, Result};

use super::special::{f_pvalue, t_pvalue};

/// Outcome of a significance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    /// Pearson r, or the ANOVA F ratio. F is `+inf` when the groups have no
    /// within-group spread but distinct means.
    pub statistic: f64,
    pub df1: usize,
    pub df2: Option<usize>,
    pub p_value: f64,
}

impl TestResult {
    pub fn is_infinite(&self) -> bool {
        self.statistic.is_infinite()
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance with the n − 1 denominator.
pub fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() as f64 - 1.0)
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::invalid("sample", format!("non-finite value {v}"))),
        None => Ok(()),
    }
}

/// Plain correlation coefficient; `None` if either side has no spread.
pub fn correlation(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 || !is_spread(x) || !is_spread(y) {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

// Rounding in the mean can leave tiny nonzero deviations for a constant
// sample, so constancy is checked on the raw values.
fn is_spread(values: &[f64]) -> bool {
    values.iter().any(|v| *v != values[0])
}

/// Pearson correlation with a two-sided t-test of r = 0 (df = n − 2).
pub fn pearson(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "pearson needs at least 3 pairs, got {}",
            x.len()
        )));
    }
    check_finite(x)?;
    check_finite(y)?;
    let mut r = correlation(x, y).ok_or(Error::ConstantSample)?;
    // Exactly linear data can come out a few ulps short of ±1.
    if 1.0 - r.abs() < 1e-14 {
        r = r.signum();
    }
    let df = x.len() - 2;
    let p_value = if r.abs() >= 1.0 {
        0.0
    } else {
        let t = r * (df as f64 / (1.0 - r * r)).sqrt();
        t_pvalue(t, df)?
    };
    Ok(TestResult {
        statistic: r,
        df1: df,
        df2: None,
        p_value,
    })
}

/// One-way ANOVA F test over groups of observations.
pub fn one_way_anova<G: AsRef<[f64]>>(groups: &[G]) -> Result<TestResult> {
    let g = groups.len();
    if g < 2 {
        return Err(Error::InsufficientData(format!("anova needs at least 2 groups, got {g}")));
    }
    let mut all = Vec::new();
    for group in groups {
        let group = group.as_ref();
        if group.is_empty() {
            return Err(Error::InsufficientData("anova group is empty".into()));
        }
        check_finite(group)?;
        all.extend_from_slice(group);
    }
    let n = all.len();
    if n <= g {
        return Err(Error::InsufficientData(format!(
            "anova needs more observations ({n}) than groups ({g})"
        )));
    }
    if !is_spread(&all) {
        return Err(Error::ConstantSample);
    }
    let grand = mean(&all);
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    let mut within_spread = false;
    for group in groups {
        let group = group.as_ref();
        let m = mean(group);
        ssb += group.len() as f64 * (m - grand).powi(2);
        ssw += group.iter().map(|v| (v - m).powi(2)).sum::<f64>();
        within_spread |= is_spread(group);
    }
    let (df1, df2) = (g - 1, n - g);
    if !within_spread {
        // Every group is constant but the overall sample is not.
        return Ok(TestResult {
            statistic: f64::INFINITY,
            df1,
            df2: Some(df2),
            p_value: 0.0,
        });
    }
    let f = (ssb / df1 as f64) / (ssw / df2 as f64);
    Ok(TestResult {
        statistic: f,
        df1,
        df2: Some(df2),
        p_value: f_pvalue(f, df1, df2)?,
    })
}
