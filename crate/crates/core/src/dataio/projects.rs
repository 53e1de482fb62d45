//! Project database CSV.
//!
//! Header (lowercase, any order, extra columns allowed):
//! `project_id,effort,fs,mts,dt,dp,lt,um,ma,at,pre`. An empty cell is a
//! missing value. Numbers use `.` as decimal point with no grouping.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use super::record::{Column, Dataset, ProjectRecord};
use crate::error::{Error, Result};

pub const HEADER: [&str; 11] = [
    "project_id", "effort", "fs", "mts", "dt", "dp", "lt", "um", "ma", "at", "pre",
];

pub fn load_projects<R: Read>(source: R) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(csv_error)?.clone();

    let mut seen = BTreeSet::new();
    for h in headers.iter() {
        if !seen.insert(h) {
            return Err(Error::parse(1, Some(h), "duplicate header"));
        }
    }
    let index_of = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::parse(1, Some(name), "missing required header"))
    };
    let mut positions = [0usize; HEADER.len()];
    for (slot, name) in positions.iter_mut().zip(HEADER) {
        *slot = index_of(name)?;
    }
    let extra_idx: Vec<usize> = (0..headers.len())
        .filter(|i| !positions.contains(i))
        .collect();
    let extra_columns: Vec<String> = extra_idx.iter().map(|&i| headers[i].to_owned()).collect();

    let mut records = Vec::new();
    let mut ids = BTreeSet::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let cell = |name: &str| -> &str {
            let i = positions[HEADER.iter().position(|h| *h == name).unwrap()];
            row.get(i).unwrap_or("")
        };

        let project_id = cell("project_id");
        if project_id.is_empty() {
            return Err(Error::parse(line, Some("project_id"), "empty project id"));
        }
        if !ids.insert(project_id.to_owned()) {
            return Err(Error::parse(line, Some("project_id"), format!("duplicate project_id {project_id:?}")));
        }
        let effort = parse_number(cell("effort"), line, "effort")?
            .ok_or_else(|| Error::parse(line, Some("effort"), "effort is required"))?;
        if effort <= 0.0 {
            return Err(Error::parse(line, Some("effort"), format!("effort {effort} must be positive")));
        }

        let mut record = ProjectRecord::new(project_id, effort);
        for column in Column::ALL {
            let raw = cell(column.name());
            if column.is_numeric() {
                let value = parse_number(raw, line, column.name())?;
                if let Some(v) = value {
                    let ok = match column {
                        Column::Pre => (1.0..=25.0).contains(&v),
                        _ => v > 0.0,
                    };
                    if !ok {
                        let range = if column == Column::Pre { "in [1, 25]" } else { "positive" };
                        return Err(Error::parse(line, Some(column.name()), format!("{v} must be {range}")));
                    }
                }
                record.set_numeric(column, value);
            } else {
                record.set_category(column, (!raw.is_empty()).then(|| raw.to_owned()));
            }
        }
        record.extra = extra_idx
            .iter()
            .map(|&i| row.get(i).unwrap_or("").to_owned())
            .collect();
        records.push(record);
    }
    Dataset::with_extra_columns(extra_columns, records)
}

fn parse_number(raw: &str, line: usize, column: &str) -> Result<Option<f64>> {
    if raw.is_empty() {
        return Ok(None);
    }
    let malformed = || Error::parse(line, Some(column), format!("malformed number {raw:?}"));
    // Rust's parser also accepts "inf", "NaN" and a leading '+'.
    if !raw
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'e' | b'E' | b'+'))
    {
        return Err(malformed());
    }
    let v: f64 = raw.parse().map_err(|_| malformed())?;
    if !v.is_finite() {
        return Err(malformed());
    }
    Ok(Some(v))
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::parse(line, None, e.to_string())
}

/// Writes the canonical header followed by any extra columns. Numbers use
/// the shortest representation that parses back to the same value.
pub fn write_projects<W: Write>(dataset: &Dataset, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    let header = HEADER
        .iter()
        .copied()
        .chain(dataset.extra_columns.iter().map(String::as_str));
    writer.write_record(header).map_err(csv_error)?;
    for r in dataset.records() {
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let cat = |v: &Option<String>| v.clone().unwrap_or_default();
        let mut row = vec![
            r.project_id.clone(),
            r.effort.to_string(),
            num(r.fs),
            num(r.mts),
            cat(&r.dt),
            cat(&r.dp),
            cat(&r.lt),
            cat(&r.um),
            cat(&r.ma),
            cat(&r.at),
            num(r.pre),
        ];
        row.extend(r.extra.iter().cloned());
        writer.write_record(&row).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn projects_to_string(dataset: &Dataset) -> Result<String> {
    let mut buf = Vec::new();
    write_projects(dataset, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}
