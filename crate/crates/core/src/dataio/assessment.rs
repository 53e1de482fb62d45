//! Risk-assessment files: one rating per line,
//! `risk_id,probability,technical,cost,schedule,team`.
//!
//! Blank lines and lines starting with `#` are skipped, and a leading
//! `risk_id,...` header line is accepted.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use super::record::Dataset;
use crate::error::{Error, Result};
use crate::riskmodel::{project_risk_exposure, ImpactVector, Level, RiskAssessment, RiskRating};

pub const ASSESSMENT_HEADER: &str = "risk_id,probability,technical,cost,schedule,team";

/// Tolerance for agreement between a stored PRE and one recomputed from an
/// assessment.
pub const PRE_AGREEMENT_TOLERANCE: f64 = 1e-9;

pub fn load_assessment<R: BufRead>(project: &str, source: R) -> Result<RiskAssessment> {
    let mut assessment = RiskAssessment::new(project);
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with("risk_id") {
            if assessment.ratings().is_empty() {
                continue;
            }
            return Err(Error::parse(line_no, None, "header after data"));
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(Error::parse(line_no, None, format!("expected 6 fields, found {}", fields.len())));
        }
        let names = ["risk_id", "probability", "technical", "cost", "schedule", "team"];
        let mut levels = [Level::MIN; 5];
        for (slot, (raw, name)) in levels.iter_mut().zip(fields[1..].iter().zip(&names[1..])) {
            *slot = raw
                .parse::<u8>()
                .map_err(|_| Error::parse(line_no, Some(name), format!("level {raw:?} is not an integer 1-5")))
                .and_then(|v| {
                    Level::new(v).map_err(|_| Error::parse(line_no, Some(name), format!("level {v} is outside 1-5")))
                })?;
        }
        let impact = ImpactVector {
            technical: levels[1],
            cost: levels[2],
            schedule: levels[3],
            team: levels[4],
        };
        let rating = RiskRating::new(fields[0], levels[0], impact)
            .map_err(|_| Error::parse(line_no, Some("risk_id"), format!("unknown risk id {:?}", fields[0])))?;
        assessment.add(rating).map_err(|e| match e {
            Error::DuplicateRating(id) => Error::parse(line_no, Some("risk_id"), format!("duplicate rating for {id:?}")),
            other => other,
        })?;
    }
    Ok(assessment)
}

pub fn write_assessment<W: Write>(assessment: &RiskAssessment, mut sink: W) -> Result<()> {
    writeln!(sink, "{ASSESSMENT_HEADER}")?;
    for r in assessment.ratings() {
        let i = &r.impact;
        writeln!(
            sink,
            "{},{},{},{},{},{}",
            r.risk, r.probability, i.technical, i.cost, i.schedule, i.team
        )?;
    }
    Ok(())
}

/// Reads every `*.csv` in `dir`; the file stem is the project id.
pub fn load_assessment_dir(dir: &Path) -> Result<BTreeMap<String, RiskAssessment>> {
    let mut out = BTreeMap::new();
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    paths.sort();
    for path in paths {
        let Some(project) = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else {
            continue;
        };
        let file = fs::File::open(&path)?;
        let assessment = load_assessment(&project, std::io::BufReader::new(file)).map_err(|e| match e {
            Error::Parse { line, column, detail } => Error::Parse {
                line,
                column,
                detail: format!("{}: {detail}", path.display()),
            },
            other => other,
        })?;
        out.insert(project, assessment);
    }
    Ok(out)
}

/// Fills in PRE from assessments. A record that already has a PRE must agree
/// with the recomputed value.
pub fn apply_assessments(dataset: &mut Dataset, assessments: &BTreeMap<String, RiskAssessment>) -> Result<()> {
    for project in assessments.keys() {
        if dataset.get(project).is_none() {
            return Err(Error::invalid("assessment", format!("no project {project:?} in the dataset")));
        }
    }
    for record in dataset.records_mut() {
        let Some(assessment) = assessments.get(&record.project_id) else {
            continue;
        };
        let pre = project_risk_exposure(assessment)?.pre;
        match record.pre {
            Some(stored) if (stored - pre).abs() > PRE_AGREEMENT_TOLERANCE => {
                return Err(Error::invalid(
                    "pre",
                    format!(
                        "project {:?}: stored PRE {stored} disagrees with assessed {pre}",
                        record.project_id
                    ),
                ));
            }
            _ => record.pre = Some(pre),
        }
    }
    Ok(())
}
