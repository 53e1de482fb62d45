//! Regression effort models. TEEM uses the effort drivers only; EEMR adds
//! project risk exposure as one more ratio regressor.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use super::drivers::{DriverSpec, Scale};
use super::metrics::{accuracy_metrics, AccuracyReport, AccuracySummary};
use crate::dataio::{Column, Dataset, ProjectRecord};
use crate::error::{Error, Result};
use crate::statcore::{default_reference, dummy_encode, ols, DesignMatrix, INTERCEPT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    /// Traditional effort estimation model.
    Teem,
    /// Effort estimation model integrating risk.
    Eemr,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Teem => "TEEM",
            ModelKind::Eemr => "EEMR",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TEEM" => Ok(ModelKind::Teem),
            "EEMR" => Ok(ModelKind::Eemr),
            _ => Err(Error::invalid("model kind", format!("{s:?} is neither TEEM nor EEMR"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub fold: Option<usize>,
    pub config_digest: String,
    pub created_unix: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub kind: ModelKind,
    /// Effort drivers, never including PRE.
    pub drivers: Vec<DriverSpec>,
    pub reference_levels: BTreeMap<Column, String>,
    pub intercept: f64,
    /// Regressor name and slope. Ratio drivers use the column name, dummy
    /// columns `column=level`, and EEMR ends with `pre`.
    pub coefficients: Vec<(String, f64)>,
    pub training: AccuracySummary,
    pub provenance: Provenance,
}

impl FittedModel {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.coefficients
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn with_provenance(mut self, seed: Option<u64>, fold: Option<usize>, config_digest: impl Into<String>) -> Self {
        self.provenance.seed = seed;
        self.provenance.fold = fold;
        self.provenance.config_digest = config_digest.into();
        self
    }
}

pub fn dummy_name(column: Column, level: &str) -> String {
    format!("{column}={level}")
}

/// Short hex digest identifying a configuration description.
pub fn config_digest(description: &str) -> String {
    let hash = Sha256::digest(description.as_bytes());
    hex::encode(&hash[..8])
}

fn effort_drivers(drivers: &[DriverSpec]) -> Result<Vec<DriverSpec>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in drivers.iter().filter(|d| !d.is_pre()) {
        let d = DriverSpec::new(d.column, d.scale)?;
        if !seen.insert(d.column) {
            return Err(Error::invalid("driver", format!("{} listed twice", d.column)));
        }
        out.push(d);
    }
    Ok(out)
}

/// Design matrix for `kind` over `dataset`, with the reference level chosen
/// for each nominal driver. PRE in `drivers` is ignored; EEMR appends it.
pub fn build_design(
    dataset: &Dataset,
    drivers: &[DriverSpec],
    kind: ModelKind,
) -> Result<(DesignMatrix, BTreeMap<Column, String>)> {
    let drivers = effort_drivers(drivers)?;
    let records = dataset.records();
    let missing = |r: &ProjectRecord, field: &str| Error::MissingValue {
        project: r.project_id.clone(),
        field: field.to_owned(),
    };

    let mut design = DesignMatrix::new(records.len());
    let mut references = BTreeMap::new();
    for d in &drivers {
        match d.scale {
            Scale::Ratio => {
                let col = records
                    .iter()
                    .map(|r| r.numeric(d.column).ok_or_else(|| missing(r, d.name())))
                    .collect::<Result<Vec<f64>>>()?;
                design.push(d.name(), col)?;
            }
            Scale::Nominal => {
                let levels = records
                    .iter()
                    .map(|r| r.category(d.column).ok_or_else(|| missing(r, d.name())))
                    .collect::<Result<Vec<&str>>>()?;
                let reference = default_reference(&levels)
                    .ok_or_else(|| Error::InsufficientData("no records".into()))?;
                let dummies = dummy_encode(&levels, &reference)?;
                for (level, col) in dummies.levels.iter().zip(dummies.columns) {
                    design.push(dummy_name(d.column, level), col)?;
                }
                references.insert(d.column, reference);
            }
        }
    }
    if kind == ModelKind::Eemr {
        let col = records
            .iter()
            .map(|r| r.pre.ok_or_else(|| missing(r, "pre")))
            .collect::<Result<Vec<f64>>>()?;
        design.push(Column::Pre.name(), col)?;
    }
    Ok((design, references))
}

/// Fits a TEEM or EEMR model by least squares on the prepared dataset.
pub fn fit_model(dataset: &Dataset, drivers: &[DriverSpec], kind: ModelKind) -> Result<FittedModel> {
    if dataset.is_empty() {
        return Err(Error::InsufficientData("empty training set".into()));
    }
    let effort_drivers = effort_drivers(drivers)?;
    let (design, reference_levels) = build_design(dataset, &effort_drivers, kind)?;
    let efforts = dataset.efforts();
    let fit = ols(&design, &efforts).map_err(|e| match e {
        Error::RankDeficient { columns } => Error::RankDeficient {
            columns: driver_names(&columns),
        },
        other => other,
    })?;
    let training = accuracy_metrics(&efforts, &fit.fitted)?.summary;

    let description = format!(
        "{kind};{}",
        effort_drivers.iter().map(|d| d.name()).collect::<Vec<_>>().join(",")
    );
    let created_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(FittedModel {
        kind,
        drivers: effort_drivers,
        reference_levels,
        intercept: fit.intercept,
        coefficients: fit.coefficients,
        training,
        provenance: Provenance {
            seed: None,
            fold: None,
            config_digest: config_digest(&description),
            created_unix,
        },
    })
}

// Maps design column names back to the drivers that produced them.
fn driver_names(columns: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in columns {
        let name = if c == INTERCEPT {
            c.as_str()
        } else {
            c.split_once('=').map_or(c.as_str(), |(d, _)| d)
        };
        if !out.iter().any(|o| o == name) {
            out.push(name.to_owned());
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EstimateOptions {
    /// Treat a level never seen in training as the reference level instead
    /// of failing.
    pub unseen_level_fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Set when the model produced zero or negative effort. The value is
    /// reported as is.
    pub nonpositive: bool,
    /// Drivers whose unseen level was mapped to the reference level.
    pub fallbacks: Vec<Column>,
}

pub fn estimate(model: &FittedModel, record: &ProjectRecord, options: &EstimateOptions) -> Result<Estimate> {
    let coefs: HashMap<&str, f64> = model
        .coefficients
        .iter()
        .map(|(n, v)| (n.as_str(), *v))
        .collect();
    let missing = |field: &str| Error::MissingValue {
        project: record.project_id.clone(),
        field: field.to_owned(),
    };
    let mut value = model.intercept;
    let mut fallbacks = Vec::new();
    for d in &model.drivers {
        match d.scale {
            Scale::Ratio => {
                let x = record.numeric(d.column).ok_or_else(|| missing(d.name()))?;
                let b = coefs.get(d.name()).copied().ok_or_else(|| {
                    Error::invalid("model", format!("no coefficient for {}", d.name()))
                })?;
                value += b * x;
            }
            Scale::Nominal => {
                let level = record.category(d.column).ok_or_else(|| missing(d.name()))?;
                let reference = model.reference_levels.get(&d.column).ok_or_else(|| {
                    Error::invalid("model", format!("no reference level for {}", d.name()))
                })?;
                if level == reference {
                    continue;
                }
                match coefs.get(dummy_name(d.column, level).as_str()) {
                    Some(b) => value += b,
                    None if options.unseen_level_fallback => fallbacks.push(d.column),
                    None => {
                        return Err(Error::UnseenLevel {
                            driver: d.name().to_owned(),
                            level: level.to_owned(),
                        })
                    }
                }
            }
        }
    }
    if model.kind == ModelKind::Eemr {
        let pre = record.pre.ok_or_else(|| missing("pre"))?;
        let b = coefs
            .get("pre")
            .copied()
            .ok_or_else(|| Error::invalid("model", "EEMR model without a pre coefficient"))?;
        value += b * pre;
    }
    Ok(Estimate {
        value,
        nonpositive: value <= 0.0,
        fallbacks,
    })
}

/// Scores the model on every record of `dataset`.
pub fn validate(model: &FittedModel, dataset: &Dataset, options: &EstimateOptions) -> Result<AccuracyReport> {
    if dataset.is_empty() {
        return Err(Error::InsufficientData("empty test set".into()));
    }
    let estimates = dataset
        .records()
        .iter()
        .map(|r| estimate(model, r, options).map(|e| e.value))
        .collect::<Result<Vec<f64>>>()?;
    accuracy_metrics(&dataset.efforts(), &estimates)
}
