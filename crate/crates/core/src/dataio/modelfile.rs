//! The `eemr-model/1` model file: one tab-separated key/value field per
//! line, repeated keys for drivers, reference levels and coefficients, and a
//! closing `end` line so truncated files are detected.
//!
//! ```text
//! format	eemr-model/1
//! kind	EEMR
//! driver	fs	ratio
//! driver	lt	nominal
//! reference	lt	3GL
//! intercept	1.0000000000000000e2
//! coef	fs	2.0000000000000000e0
//! coef	lt=4GL	-1.5000000000000000e1
//! coef	pre	5.0000000000000000e0
//! train.n	120
//! train.mmre	...
//! seed	42
//! fold	-
//! config_digest	4f1c2a9e0b7d3e55
//! created	1760572800
//! end
//! ```

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::dataio::Column;
use crate::error::{Error, Result};
use crate::pipeline::{AccuracySummary, DriverSpec, FittedModel, ModelKind, Provenance, Scale};

pub const MODEL_FORMAT: &str = "eemr-model/1";

fn check_label(what: &str, s: &str) -> Result<()> {
    if s.is_empty() || s.contains(['\t', '\n', '\r']) {
        return Err(Error::Format(format!("{what} {s:?} cannot be stored in a model file")));
    }
    Ok(())
}

// 17 significant digits, enough to round-trip any f64.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_owned(), |v| v.to_string())
}

pub fn save_model<W: Write>(model: &FittedModel, mut sink: W) -> Result<()> {
    let mut lines: Vec<String> = vec![format!("format\t{MODEL_FORMAT}"), format!("kind\t{}", model.kind)];
    for d in &model.drivers {
        lines.push(format!("driver\t{}\t{}", d.name(), d.scale.as_str()));
    }
    for (column, level) in &model.reference_levels {
        check_label("reference level", level)?;
        lines.push(format!("reference\t{column}\t{level}"));
    }
    lines.push(format!("intercept\t{}", float(model.intercept)));
    for (name, value) in &model.coefficients {
        check_label("coefficient name", name)?;
        lines.push(format!("coef\t{name}\t{}", float(*value)));
    }
    let t = &model.training;
    lines.push(format!("train.n\t{}", t.n));
    lines.push(format!("train.mmre\t{}", float(t.mmre)));
    lines.push(format!("train.pred25\t{}", float(t.pred_25)));
    lines.push(format!("train.r2\t{}", float(t.r_squared)));
    lines.push(format!("train.r2_degenerate\t{}", t.r_squared_degenerate));
    let p = &model.provenance;
    if p.config_digest.contains(['\t', '\n', '\r']) {
        return Err(Error::Format("config digest contains a tab or newline".into()));
    }
    lines.push(format!("seed\t{}", opt(p.seed)));
    lines.push(format!("fold\t{}", opt(p.fold)));
    lines.push(format!("config_digest\t{}", p.config_digest));
    lines.push(format!("created\t{}", p.created_unix));
    lines.push("end".to_owned());
    for line in lines {
        writeln!(sink, "{line}")?;
    }
    Ok(())
}

pub fn model_to_string(model: &FittedModel) -> Result<String> {
    let mut buf = Vec::new();
    save_model(model, &mut buf)?;
    Ok(String::from_utf8(buf).expect("model files are UTF-8"))
}

#[derive(Default)]
struct Fields {
    single: BTreeMap<&'static str, (usize, String)>,
    drivers: Vec<DriverSpec>,
    references: BTreeMap<Column, String>,
    coefficients: Vec<(String, f64)>,
}

const SINGLE_KEYS: [&str; 12] = [
    "kind",
    "intercept",
    "train.n",
    "train.mmre",
    "train.pred25",
    "train.r2",
    "train.r2_degenerate",
    "seed",
    "fold",
    "config_digest",
    "created",
    "format",
];

fn bad(line: usize, detail: impl Into<String>) -> Error {
    Error::Format(format!("line {line}: {}", detail.into()))
}

pub fn load_model<R: BufRead>(source: R) -> Result<FittedModel> {
    let mut fields = Fields::default();
    let mut ended = false;
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if ended {
            if line.trim().is_empty() {
                continue;
            }
            return Err(bad(lineno, "content after end"));
        }
        if lineno == 1 {
            match line.split_once('\t') {
                Some(("format", tag)) if tag == MODEL_FORMAT => {}
                Some(("format", tag)) => {
                    return Err(Error::Format(format!(
                        "unsupported model format {tag:?}, expected {MODEL_FORMAT}"
                    )))
                }
                _ => return Err(bad(1, format!("expected \"format\\t{MODEL_FORMAT}\""))),
            }
        }
        if line == "end" {
            ended = true;
            continue;
        }
        let (key, rest) = line
            .split_once('\t')
            .ok_or_else(|| bad(lineno, format!("expected key<TAB>value, got {line:?}")))?;
        match key {
            "driver" => {
                let (name, scale) = rest
                    .split_once('\t')
                    .ok_or_else(|| bad(lineno, "driver needs a name and a scale"))?;
                let column: Column = name.parse()?;
                fields.drivers.push(DriverSpec::new(column, scale.parse::<Scale>()?)?);
            }
            "reference" => {
                let (name, level) = rest
                    .split_once('\t')
                    .ok_or_else(|| bad(lineno, "reference needs a driver and a level"))?;
                let column: Column = name.parse()?;
                if fields.references.insert(column, level.to_owned()).is_some() {
                    return Err(bad(lineno, format!("second reference level for {column}")));
                }
            }
            "coef" => {
                let (name, value) = rest
                    .split_once('\t')
                    .ok_or_else(|| bad(lineno, "coef needs a name and a value"))?;
                if fields.coefficients.iter().any(|(n, _)| n == name) {
                    return Err(bad(lineno, format!("coefficient {name:?} repeated")));
                }
                fields.coefficients.push((name.to_owned(), parse_float(lineno, value)?));
            }
            _ => {
                let key = SINGLE_KEYS
                    .iter()
                    .find(|k| **k == key)
                    .ok_or_else(|| bad(lineno, format!("unknown key {key:?}")))?;
                if fields.single.insert(key, (lineno, rest.to_owned())).is_some() {
                    return Err(bad(lineno, format!("{key} given twice")));
                }
            }
        }
    }
    if !ended {
        return Err(Error::Format("truncated model file: no end line".into()));
    }
    build(fields)
}

fn parse_float(line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| bad(line, format!("{s:?} is not a number")))
}

fn parse_int<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse::<T>()
        .map_err(|_| bad(line, format!("{s:?} is not a non-negative integer")))
}

fn build(mut f: Fields) -> Result<FittedModel> {
    let mut take = |key: &str| {
        f.single
            .remove(key)
            .ok_or_else(|| Error::Format(format!("missing field {key}")))
    };
    let (_, kind) = take("kind")?;
    let kind: ModelKind = kind.parse()?;
    let (l, v) = take("intercept")?;
    let intercept = parse_float(l, &v)?;
    let (l, v) = take("train.n")?;
    let n = parse_int(l, &v)?;
    let (l, v) = take("train.mmre")?;
    let mmre = parse_float(l, &v)?;
    let (l, v) = take("train.pred25")?;
    let pred_25 = parse_float(l, &v)?;
    let (l, v) = take("train.r2")?;
    let r_squared = parse_float(l, &v)?;
    let (l, v) = take("train.r2_degenerate")?;
    let r_squared_degenerate = match v.as_str() {
        "true" => true,
        "false" => false,
        _ => return Err(bad(l, format!("{v:?} is not true or false"))),
    };
    let (l, v) = take("seed")?;
    let seed = if v == "-" { None } else { Some(parse_int(l, &v)?) };
    let (l, v) = take("fold")?;
    let fold = if v == "-" { None } else { Some(parse_int(l, &v)?) };
    let (_, config_digest) = take("config_digest")?;
    let (l, v) = take("created")?;
    let created_unix = parse_int(l, &v)?;

    for d in &f.drivers {
        if d.scale == Scale::Nominal && !f.references.contains_key(&d.column) {
            return Err(Error::Format(format!("no reference level for nominal driver {}", d.column)));
        }
    }
    if let Some(c) = f.references.keys().find(|c| !f.drivers.iter().any(|d| d.column == **c)) {
        return Err(Error::Format(format!("reference level for {c}, which is not a driver")));
    }
    Ok(FittedModel {
        kind,
        drivers: f.drivers,
        reference_levels: f.references,
        intercept,
        coefficients: f.coefficients,
        training: AccuracySummary {
            n,
            mmre,
            pred_25,
            r_squared,
            r_squared_degenerate,
        },
        provenance: Provenance {
            seed,
            fold,
            config_digest,
            created_unix,
        },
    })
}
