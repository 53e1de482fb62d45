use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Driver columns of the project schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    /// Functional size.
    Fs,
    /// Maximum team size.
    Mts,
    /// Development type.
    Dt,
    /// Development platform.
    Dp,
    /// Language type.
    Lt,
    /// Used methodology.
    Um,
    /// Methodology acquired.
    Ma,
    /// Application type.
    At,
    /// Project risk exposure.
    Pre,
}

impl Column {
    pub const ALL: [Column; 9] = [
        Column::Fs,
        Column::Mts,
        Column::Dt,
        Column::Dp,
        Column::Lt,
        Column::Um,
        Column::Ma,
        Column::At,
        Column::Pre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Fs => "fs",
            Column::Mts => "mts",
            Column::Dt => "dt",
            Column::Dp => "dp",
            Column::Lt => "lt",
            Column::Um => "um",
            Column::Ma => "ma",
            Column::At => "at",
            Column::Pre => "pre",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Column::Fs | Column::Mts | Column::Pre)
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid("column", format!("unknown driver column {s:?}")))
    }
}

/// One historical or candidate project. Only the id and effort are required.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProjectRecord {
    pub project_id: String,
    pub effort: f64,
    pub fs: Option<f64>,
    pub mts: Option<f64>,
    pub dt: Option<String>,
    pub dp: Option<String>,
    pub lt: Option<String>,
    pub um: Option<String>,
    pub ma: Option<String>,
    pub at: Option<String>,
    pub pre: Option<f64>,
    /// Values of columns outside the schema, aligned with
    /// [`Dataset::extra_columns`]. Empty string means missing.
    pub extra: Vec<String>,
}

impl ProjectRecord {
    pub fn new(project_id: impl Into<String>, effort: f64) -> Self {
        ProjectRecord {
            project_id: project_id.into(),
            effort,
            ..Default::default()
        }
    }

    pub fn numeric(&self, column: Column) -> Option<f64> {
        match column {
            Column::Fs => self.fs,
            Column::Mts => self.mts,
            Column::Pre => self.pre,
            _ => None,
        }
    }

    pub fn category(&self, column: Column) -> Option<&str> {
        match column {
            Column::Dt => self.dt.as_deref(),
            Column::Dp => self.dp.as_deref(),
            Column::Lt => self.lt.as_deref(),
            Column::Um => self.um.as_deref(),
            Column::Ma => self.ma.as_deref(),
            Column::At => self.at.as_deref(),
            _ => None,
        }
    }

    pub fn has(&self, column: Column) -> bool {
        if column.is_numeric() {
            self.numeric(column).is_some()
        } else {
            self.category(column).is_some()
        }
    }

    pub fn set_numeric(&mut self, column: Column, value: Option<f64>) {
        match column {
            Column::Fs => self.fs = value,
            Column::Mts => self.mts = value,
            Column::Pre => self.pre = value,
            _ => panic!("{column} is not a numeric column"),
        }
    }

    pub fn set_category(&mut self, column: Column, value: Option<String>) {
        let slot = match column {
            Column::Dt => &mut self.dt,
            Column::Dp => &mut self.dp,
            Column::Lt => &mut self.lt,
            Column::Um => &mut self.um,
            Column::Ma => &mut self.ma,
            Column::At => &mut self.at,
            _ => panic!("{column} is not a categorical column"),
        };
        *slot = value;
    }

    pub fn validate(&self) -> Result<()> {
        if self.project_id.is_empty() {
            return Err(Error::invalid("project_id", "empty project id"));
        }
        if !(self.effort.is_finite() && self.effort > 0.0) {
            return Err(Error::invalid(
                "effort",
                format!("project {:?}: effort {} must be positive", self.project_id, self.effort),
            ));
        }
        for (name, value) in [("fs", self.fs), ("mts", self.mts)] {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::invalid(
                        name,
                        format!("project {:?}: {v} must be positive", self.project_id),
                    ));
                }
            }
        }
        if let Some(pre) = self.pre {
            if !(1.0..=25.0).contains(&pre) {
                return Err(Error::invalid(
                    "pre",
                    format!("project {:?}: {pre} is outside [1, 25]", self.project_id),
                ));
            }
        }
        Ok(())
    }
}

/// A project database: records with unique ids plus any extra columns
/// carried through from the input.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub extra_columns: Vec<String>,
    records: Vec<ProjectRecord>,
}

impl Dataset {
    pub fn new(records: Vec<ProjectRecord>) -> Result<Self> {
        Dataset::with_extra_columns(Vec::new(), records)
    }

    pub fn with_extra_columns(extra_columns: Vec<String>, records: Vec<ProjectRecord>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for r in &records {
            r.validate()?;
            if r.extra.len() != extra_columns.len() {
                return Err(Error::invalid(
                    "record",
                    format!("project {:?} has {} extra values, expected {}", r.project_id, r.extra.len(), extra_columns.len()),
                ));
            }
            if !ids.insert(r.project_id.as_str()) {
                return Err(Error::invalid("project_id", format!("duplicate id {:?}", r.project_id)));
            }
        }
        Ok(Dataset {
            extra_columns,
            records,
        })
    }

    pub fn records(&self) -> &[ProjectRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn efforts(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.effort).collect()
    }

    /// True when at least one record carries a PRE value.
    pub fn has_pre(&self) -> bool {
        self.records.iter().any(|r| r.pre.is_some())
    }

    pub fn get(&self, project_id: &str) -> Option<&ProjectRecord> {
        self.records.iter().find(|r| r.project_id == project_id)
    }

    /// Records at the given positions, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            extra_columns: self.extra_columns.clone(),
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
        }
    }

    pub(crate) fn records_mut(&mut self) -> &mut [ProjectRecord] {
        &mut self.records
    }

    pub(crate) fn filter(&self, mut keep: impl FnMut(&ProjectRecord) -> bool) -> Dataset {
        Dataset {
            extra_columns: self.extra_columns.clone(),
            records: self.records.iter().filter(|r| keep(r)).cloned().collect(),
        }
    }
}
