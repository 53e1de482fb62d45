//! Driver selection: Pearson correlation against effort for ratio drivers,
//! one-way ANOVA of effort grouped by level for nominal drivers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::drivers::{DriverSpec, Scale};
use crate::dataio::{Column, Dataset};
use crate::error::{Error, Result};
use crate::statcore::{one_way_anova, pearson};

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    /// Minimum |r| for a ratio driver.
    pub r_threshold: f64,
    /// Maximum ANOVA p-value for a nominal driver.
    pub alpha: f64,
    pub force_include: Vec<Column>,
    pub force_exclude: Vec<Column>,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            r_threshold: 0.2,
            alpha: 0.05,
            force_include: Vec::new(),
            force_exclude: Vec::new(),
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r_threshold) {
            return Err(Error::invalid("r_threshold", format!("{} is outside [0, 1]", self.r_threshold)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("{} is outside (0, 1)", self.alpha)));
        }
        if let Some(c) = self.force_include.iter().find(|c| self.force_exclude.contains(c)) {
            return Err(Error::invalid("force lists", format!("{c} is both included and excluded")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Pearson,
    Anova,
}

impl TestKind {
    pub fn label(self) -> &'static str {
        match self {
            TestKind::Pearson => "Pearson",
            TestKind::Anova => "One Way ANOVA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    Significant,
    NotSignificant,
    ForcedIn,
    ForcedOut,
    /// The driver (or effort) does not vary over the usable records.
    ZeroVariance,
    InsufficientData,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::Significant => "significant",
            Reason::NotSignificant => "not significant",
            Reason::ForcedIn => "forced in",
            Reason::ForcedOut => "forced out",
            Reason::ZeroVariance => "zero variance",
            Reason::InsufficientData => "insufficient data",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionEntry {
    pub driver: DriverSpec,
    pub test: TestKind,
    /// r or F; `None` when the test could not run.
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    /// Records with both the driver and effort present.
    pub n: usize,
    pub selected: bool,
    pub reason: Reason,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelectionReport {
    pub entries: Vec<SelectionEntry>,
    pub warnings: Vec<String>,
}

impl SelectionReport {
    pub fn selected(&self) -> Vec<DriverSpec> {
        self.entries
            .iter()
            .filter(|e| e.selected)
            .map(|e| e.driver)
            .collect()
    }

    pub fn entry(&self, column: Column) -> Option<&SelectionEntry> {
        self.entries.iter().find(|e| e.driver.column == column)
    }
}

/// Tests every candidate driver against effort. PRE is added as a ratio
/// candidate when the dataset carries it and `specs` does not list it.
pub fn select_drivers(dataset: &Dataset, specs: &[DriverSpec], config: &SelectionConfig) -> Result<SelectionReport> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::InsufficientData("empty dataset".into()));
    }
    let mut candidates: Vec<DriverSpec> = Vec::with_capacity(specs.len() + 1);
    let mut seen = BTreeSet::new();
    for spec in specs {
        let spec = DriverSpec::new(spec.column, spec.scale)?;
        if !seen.insert(spec.column) {
            return Err(Error::invalid("driver", format!("{} listed twice", spec.column)));
        }
        candidates.push(spec);
    }
    if dataset.has_pre() && !seen.contains(&Column::Pre) {
        candidates.push(DriverSpec::for_column(Column::Pre));
    }

    let mut report = SelectionReport::default();
    for driver in candidates {
        let entry = test_driver(dataset, driver, config, &mut report.warnings)?;
        report.entries.push(entry);
    }
    Ok(report)
}

fn test_driver(
    dataset: &Dataset,
    driver: DriverSpec,
    config: &SelectionConfig,
    warnings: &mut Vec<String>,
) -> Result<SelectionEntry> {
    let (test, outcome, n) = match driver.scale {
        Scale::Ratio => {
            let (x, y): (Vec<f64>, Vec<f64>) = dataset
                .records()
                .iter()
                .filter_map(|r| r.numeric(driver.column).map(|v| (v, r.effort)))
                .unzip();
            let n = x.len();
            (TestKind::Pearson, pearson(&x, &y), n)
        }
        Scale::Nominal => {
            let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
            for r in dataset.records() {
                if let Some(level) = r.category(driver.column) {
                    groups.entry(level).or_default().push(r.effort);
                }
            }
            let n = groups.values().map(Vec::len).sum();
            let outcome = if groups.len() < 2 && n > 0 {
                Err(Error::ConstantSample)
            } else {
                one_way_anova(&groups.into_values().collect::<Vec<_>>())
            };
            (TestKind::Anova, outcome, n)
        }
    };

    let (statistic, p_value, mut selected, mut reason) = match outcome {
        Ok(result) => {
            let significant = match test {
                TestKind::Pearson => result.statistic.abs() >= config.r_threshold,
                TestKind::Anova => result.p_value <= config.alpha,
            };
            if result.is_infinite() {
                warnings.push(format!(
                    "{}: no within-level variance of effort, F reported as infinite",
                    driver.name()
                ));
            }
            let reason = if significant { Reason::Significant } else { Reason::NotSignificant };
            (Some(result.statistic), Some(result.p_value), significant, reason)
        }
        Err(Error::ConstantSample) => (None, None, false, Reason::ZeroVariance),
        Err(Error::InsufficientData(_)) => (None, None, false, Reason::InsufficientData),
        Err(e) => return Err(e),
    };
    if config.force_include.contains(&driver.column) {
        selected = true;
        reason = Reason::ForcedIn;
    } else if config.force_exclude.contains(&driver.column) {
        selected = false;
        reason = Reason::ForcedOut;
    }
    Ok(SelectionEntry {
        driver,
        test,
        statistic,
        p_value,
        n,
        selected,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::ProjectRecord;

    fn dataset(rows: &[(f64, f64, f64, &str)]) -> Dataset {
        Dataset::new(
            rows.iter()
                .enumerate()
                .map(|(i, (effort, fs, mts, lt))| {
                    let mut r = ProjectRecord::new(format!("p{i}"), *effort);
                    r.fs = Some(*fs);
                    r.mts = Some(*mts);
                    r.lt = Some(lt.to_string());
                    r
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn perfect_and_constant_drivers() {
        let d = dataset(&[
            (10.0, 10.0, 3.0, "a"),
            (20.0, 20.0, 3.0, "a"),
            (35.0, 35.0, 3.0, "a"),
            (12.0, 12.0, 3.0, "a"),
        ]);
        let specs: Vec<DriverSpec> = ["fs", "mts", "lt"].iter().map(|s| s.parse().unwrap()).collect();
        let report = select_drivers(&d, &specs, &SelectionConfig::default()).unwrap();
        let fs = report.entry(Column::Fs).unwrap();
        assert!((fs.statistic.unwrap() - 1.0).abs() < 1e-12);
        assert!(fs.selected);
        for c in [Column::Mts, Column::Lt] {
            let e = report.entry(c).unwrap();
            assert!(!e.selected);
            assert_eq!(e.reason, Reason::ZeroVariance);
        }
        assert!(report.entry(Column::Pre).is_none());
    }

    #[test]
    fn nominal_driver_and_overrides() {
        let d = dataset(&[
            (10.0, 5.0, 1.0, "a"),
            (11.0, 3.0, 2.0, "a"),
            (12.0, 4.0, 1.0, "a"),
            (30.0, 5.0, 2.0, "b"),
            (31.0, 3.0, 1.0, "b"),
            (33.0, 4.0, 2.0, "b"),
        ]);
        let specs: Vec<DriverSpec> = ["fs", "lt"].iter().map(|s| s.parse().unwrap()).collect();
        let report = select_drivers(&d, &specs, &SelectionConfig::default()).unwrap();
        let lt = report.entry(Column::Lt).unwrap();
        assert_eq!(lt.test, TestKind::Anova);
        assert!(lt.selected);
        assert!(lt.p_value.unwrap() < 1e-4);

        let config = SelectionConfig {
            force_include: vec![Column::Fs],
            force_exclude: vec![Column::Lt],
            ..Default::default()
        };
        let forced = select_drivers(&d, &specs, &config).unwrap();
        assert_eq!(forced.entry(Column::Fs).unwrap().reason, Reason::ForcedIn);
        assert!(!forced.entry(Column::Lt).unwrap().selected);
    }

    #[test]
    fn pre_added_when_present() {
        let mut d = dataset(&[(10.0, 1.0, 1.0, "a"), (20.0, 2.0, 2.0, "b"), (30.0, 4.0, 1.0, "a")]);
        for (i, r) in d.records_mut().iter_mut().enumerate() {
            r.pre = Some(1.0 + i as f64);
        }
        let report = select_drivers(&d, &["fs".parse().unwrap()], &SelectionConfig::default()).unwrap();
        let pre = report.entry(Column::Pre).unwrap();
        assert_eq!(pre.driver.scale, Scale::Ratio);
        assert!(pre.selected);
    }

    #[test]
    fn config_and_spec_validation() {
        let d = dataset(&[(10.0, 1.0, 1.0, "a"), (20.0, 2.0, 2.0, "b"), (30.0, 4.0, 1.0, "a")]);
        let bad = SelectionConfig {
            alpha: 0.0,
            ..Default::default()
        };
        assert!(select_drivers(&d, &[], &bad).is_err());
        let twice: Vec<DriverSpec> = ["fs", "fs"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(select_drivers(&d, &twice, &SelectionConfig::default()).is_err());
        assert!(select_drivers(&Dataset::default(), &[], &SelectionConfig::default()).is_err());
    }
}
