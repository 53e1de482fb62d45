use std::fmt;
use std::str::FromStr;

use crate::dataio::Column;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scale {
    Ratio,
    Nominal,
}

impl Scale {
    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Ratio => "ratio",
            Scale::Nominal => "nominal",
        }
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ratio" => Ok(Scale::Ratio),
            "nominal" => Ok(Scale::Nominal),
            _ => Err(Error::invalid("scale", format!("{s:?} is neither ratio nor nominal"))),
        }
    }
}

/// A candidate effort driver. Numeric columns are ratio-scaled and
/// categorical columns nominal; other pairings are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DriverSpec {
    pub column: Column,
    pub scale: Scale,
}

impl DriverSpec {
    pub fn new(column: Column, scale: Scale) -> Result<Self> {
        let expected = if column.is_numeric() { Scale::Ratio } else { Scale::Nominal };
        if scale != expected {
            return Err(Error::invalid(
                "driver",
                format!("{column} must be {}, not {}", expected.as_str(), scale.as_str()),
            ));
        }
        Ok(DriverSpec { column, scale })
    }

    /// Spec with the scale implied by the column.
    pub fn for_column(column: Column) -> Self {
        let scale = if column.is_numeric() { Scale::Ratio } else { Scale::Nominal };
        DriverSpec { column, scale }
    }

    pub fn name(&self) -> &'static str {
        self.column.name()
    }

    pub fn is_pre(&self) -> bool {
        self.column == Column::Pre
    }
}

impl fmt::Display for DriverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.scale.as_str())
    }
}

/// Parses `name` or `name:scale`.
impl FromStr for DriverSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, scale)) => DriverSpec::new(name.parse()?, scale.parse()?),
            None => Ok(DriverSpec::for_column(s.parse()?)),
        }
    }
}

/// The eight drivers of the project schema, without PRE.
pub fn default_driver_specs() -> Vec<DriverSpec> {
    [
        Column::Fs,
        Column::Mts,
        Column::Dt,
        Column::Dp,
        Column::Lt,
        Column::Um,
        Column::Ma,
        Column::At,
    ]
    .into_iter()
    .map(DriverSpec::for_column)
    .collect()
}
