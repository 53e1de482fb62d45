//! The `riskest` command line.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a data or validation
//! error. Every failure starts with one `error[usage]: ...` or
//! `error[data]: <kind>: ...` line. Tables print metrics to three decimals;
//! `--kv` switches to tab-separated key/value lines at full precision.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dataio::{
    apply_assessments, generate_synthetic, load_assessment, load_assessment_dir, load_model, load_projects,
    save_model, write_projects, Column, Dataset, GeneratorConfig,
};
use crate::error::{Error, Result};
use crate::pipeline::{
    cross_validate, default_driver_specs, estimate, fit_model, kfold_split, prepare, risk_factor_adjust,
    select_drivers, AccuracySummary, CvReport, DriverSpec, EstimateOptions, ModelKind, PrepareConfig,
    PreparationReport, SelectionConfig, SelectionReport, WorkflowConfig, DEFAULT_K,
};
use crate::riskmodel::{builtin_taxonomy, project_risk_exposure};

#[derive(Parser, Debug)]
#[command(name = "riskest", version, about = "Effort estimation integrating project risk exposure")]
struct Cli {
    /// Print tab-separated key/value lines at full precision instead of tables.
    #[arg(long, global = true)]
    kv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the 27 software risks by dimension.
    Taxonomy,
    /// Score a risk-assessment file: per-dimension exposure and PRE.
    Assess {
        file: PathBuf,
        /// Project id; defaults to the file stem.
        #[arg(long)]
        project: Option<String>,
    },
    /// Test candidate drivers against effort.
    Select {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        selection: SelectionArgs,
    },
    /// Drop records missing a driver and effort outliers.
    Prepare {
        #[command(flatten)]
        data: DataArgs,
        /// Drivers a record must have (default: all eight plus pre).
        #[arg(long, value_delimiter = ',')]
        drivers: Option<Vec<DriverSpec>>,
        #[arg(long, default_value_t = 1.5)]
        fence: f64,
        /// Write the cleaned CSV here; the report then goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a TEEM or EEMR model and write a model file.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "eemr")]
        kind: ModelKind,
        /// Drivers to use (default: those chosen by selection).
        #[arg(long, value_delimiter = ',')]
        drivers: Option<Vec<DriverSpec>>,
        #[command(flatten)]
        selection: SelectionArgs,
        /// Train on every fold except this one.
        #[arg(long)]
        fold: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, env = "RISKEST_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select, prepare, then compare TEEM and EEMR by k-fold cross-validation.
    CrossValidate {
        #[command(flatten)]
        data: DataArgs,
        /// Candidate drivers (default: all eight).
        #[arg(long, value_delimiter = ',')]
        drivers: Option<Vec<DriverSpec>>,
        /// Use the given drivers as they are instead of testing them.
        #[arg(long)]
        skip_selection: bool,
        #[command(flatten)]
        selection: SelectionArgs,
        #[arg(long, default_value_t = 1.5)]
        fence: f64,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, env = "RISKEST_SEED", default_value_t = 42)]
        seed: u64,
        /// Map unseen levels in a test fold to the reference level.
        #[arg(long)]
        fallback: bool,
    },
    /// Estimate effort for one project with a saved model.
    Estimate {
        #[arg(long)]
        model: PathBuf,
        /// Project CSV holding the record to estimate.
        #[arg(long)]
        project: PathBuf,
        /// Record id, required when the file holds several projects.
        #[arg(long)]
        id: Option<String>,
        /// Risk-assessment file supplying the project's PRE.
        #[arg(long)]
        assessment: Option<PathBuf>,
        /// Multiply the estimate by this risk factor (at least 1).
        #[arg(long)]
        risk_factor: Option<f64>,
        /// Map unseen levels to the reference level.
        #[arg(long)]
        fallback: bool,
    },
    /// Write a synthetic project database.
    Gen {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, env = "RISKEST_SEED", default_value_t = 42)]
        seed: u64,
        /// Noise standard deviation of the planted effort law.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        missing_rate: f64,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Project database CSV.
    #[arg(long)]
    data: PathBuf,
    /// Directory of per-project assessment files (`<project_id>.csv`)
    /// supplying PRE.
    #[arg(long)]
    assessments: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelectionArgs {
    #[arg(long, default_value_t = 0.2)]
    r_threshold: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_delimiter = ',')]
    include: Vec<Column>,
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<Column>,
}

impl SelectionArgs {
    fn config(&self) -> SelectionConfig {
        SelectionConfig {
            r_threshold: self.r_threshold,
            alpha: self.alpha,
            force_include: self.include.clone(),
            force_exclude: self.exclude.clone(),
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error[usage]: {first}");
            let _ = write!(err, "{text}");
            return 1;
        }
    };
    let mut text = String::new();
    match execute(&cli, &mut text, err) {
        Ok(()) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error[data]: io: {e}");
                2
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error[data]: {}: {e}", e.kind());
            2
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_data(args: &DataArgs) -> Result<Dataset> {
    let mut dataset = load_projects(open(&args.data)?)?;
    if let Some(dir) = &args.assessments {
        let assessments = load_assessment_dir(dir).map_err(|e| match e {
            Error::Io(m) => Error::Io(format!("{}: {m}", dir.display())),
            other => other,
        })?;
        apply_assessments(&mut dataset, &assessments)?;
    }
    Ok(dataset)
}

fn f3(v: f64) -> String {
    format!("{v:.3}")
}

fn opt3(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), f3)
}

fn opt_full(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |v| v.to_string())
}

fn driver_list(drivers: &[DriverSpec]) -> String {
    if drivers.is_empty() {
        return "(none)".to_owned();
    }
    drivers.iter().map(|d| d.name()).collect::<Vec<_>>().join(",")
}

fn execute(cli: &Cli, out: &mut String, err: &mut dyn Write) -> Result<()> {
    let kv = cli.kv;
    match &cli.command {
        Command::Taxonomy => taxonomy(out, kv),
        Command::Assess { file, project } => assess(out, kv, file, project.as_deref()),
        Command::Select { data, selection } => {
            let dataset = load_data(data)?;
            let report = select_drivers(&dataset, &default_driver_specs(), &selection.config())?;
            print_selection(out, kv, &report);
            Ok(())
        }
        Command::Prepare {
            data,
            drivers,
            fence,
            out: path,
        } => {
            let dataset = load_data(data)?;
            let drivers = drivers.clone().unwrap_or_else(|| {
                let mut all = default_driver_specs();
                all.push(DriverSpec::for_column(Column::Pre));
                all
            });
            let config = PrepareConfig {
                fence_multiplier: *fence,
            };
            let (prepared, report) = prepare(&dataset, &drivers, &config)?;
            let mut text = String::new();
            print_preparation(&mut text, kv, &report);
            match path {
                Some(path) => {
                    write_projects(&prepared, create(path)?)?;
                    out.push_str(&text);
                }
                None => {
                    let mut csv = Vec::new();
                    write_projects(&prepared, &mut csv)?;
                    out.push_str(&String::from_utf8(csv).expect("CSV output is UTF-8"));
                    err.write_all(text.as_bytes())?;
                }
            }
            Ok(())
        }
        Command::Fit {
            data,
            kind,
            drivers,
            selection,
            fold,
            k,
            seed,
            out: path,
        } => {
            let dataset = load_data(data)?;
            let drivers = match drivers {
                Some(d) => d.clone(),
                None => select_drivers(&dataset, &default_driver_specs(), &selection.config())?.selected(),
            };
            let training = match fold {
                Some(fold) => {
                    if *fold >= *k {
                        return Err(Error::invalid("fold", format!("{fold} is not below k = {k}")));
                    }
                    dataset.subset(&kfold_split(dataset.len(), *k, *seed)?.train_indices(*fold))
                }
                None => dataset,
            };
            let mut model = fit_model(&training, &drivers, *kind)?;
            if fold.is_some() {
                let digest = model.provenance.config_digest.clone();
                model = model.with_provenance(Some(*seed), *fold, digest);
            }
            if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
                model.provenance.created_unix = epoch;
            }
            save_model(&model, create(path)?)?;
            if kv {
                let _ = writeln!(out, "model\t{}", path.display());
                let _ = writeln!(out, "kind\t{}", model.kind);
                let _ = writeln!(out, "drivers\t{}", driver_list(&model.drivers));
                let _ = writeln!(out, "n\t{}", model.training.n);
            } else {
                let _ = writeln!(
                    out,
                    "wrote {} model ({} drivers: {}) trained on {} projects to {}",
                    model.kind,
                    model.drivers.len(),
                    driver_list(&model.drivers),
                    model.training.n,
                    path.display()
                );
            }
            Ok(())
        }
        Command::CrossValidate {
            data,
            drivers,
            skip_selection,
            selection,
            fence,
            k,
            seed,
            fallback,
        } => {
            let dataset = load_data(data)?;
            let specs = drivers.clone().unwrap_or_else(default_driver_specs);
            let mut config = WorkflowConfig {
                selection: selection.config(),
                ..Default::default()
            };
            config.prepare.fence_multiplier = *fence;
            config.cv.k = *k;
            config.cv.seed = *seed;
            config.cv.estimate.unseen_level_fallback = *fallback;

            let chosen: Vec<DriverSpec>;
            let selection_report = if *skip_selection {
                chosen = specs.iter().copied().filter(|d| !d.is_pre()).collect();
                None
            } else {
                let report = select_drivers(&dataset, &specs, &config.selection)?;
                chosen = report.selected().into_iter().filter(|d| !d.is_pre()).collect();
                Some(report)
            };
            let mut required = chosen.clone();
            required.push(DriverSpec::for_column(Column::Pre));
            let (prepared, preparation) = prepare(&dataset, &required, &config.prepare)?;
            let report = cross_validate(&prepared, &chosen, &config.cv)?;
            if let Some(s) = &selection_report {
                print_selection(out, kv, s);
                out.push('\n');
            }
            print_preparation(out, kv, &preparation);
            out.push('\n');
            print_cv(out, kv, &report, &config.digest(&specs));
            Ok(())
        }
        Command::Estimate {
            model,
            project,
            id,
            assessment,
            risk_factor,
            fallback,
        } => {
            let model = load_model(open(model)?)?;
            let dataset = load_projects(open(project)?)?;
            let mut record = match id {
                Some(id) => dataset
                    .get(id)
                    .cloned()
                    .ok_or_else(|| Error::invalid("id", format!("no project {id:?} in {}", project.display())))?,
                None if dataset.len() == 1 => dataset.records()[0].clone(),
                None => {
                    return Err(Error::invalid(
                        "id",
                        format!("{} holds {} projects; pass --id", project.display(), dataset.len()),
                    ))
                }
            };
            if let Some(path) = assessment {
                let assessment = load_assessment(&record.project_id, open(path)?)?;
                let mut single = Dataset::new(vec![record])?;
                apply_assessments(&mut single, &BTreeMap::from([(assessment.project.clone(), assessment)]))?;
                record = single.records()[0].clone();
            }
            let options = EstimateOptions {
                unseen_level_fallback: *fallback,
            };
            let result = estimate(&model, &record, &options)?;
            let adjusted = risk_factor.map(|f| risk_factor_adjust(result.value, f)).transpose()?;
            if kv {
                let _ = writeln!(out, "project\t{}", record.project_id);
                let _ = writeln!(out, "kind\t{}", model.kind);
                let _ = writeln!(out, "estimate\t{}", result.value);
                if let (Some(f), Some(a)) = (risk_factor, adjusted) {
                    let _ = writeln!(out, "risk_factor\t{f}");
                    let _ = writeln!(out, "adjusted\t{a}");
                }
                let _ = writeln!(out, "nonpositive\t{}", result.nonpositive);
                for c in &result.fallbacks {
                    let _ = writeln!(out, "fallback\t{c}");
                }
            } else {
                let _ = writeln!(out, "project   {}", record.project_id);
                let _ = writeln!(out, "model     {}", model.kind);
                let _ = writeln!(out, "estimate  {}", f3(result.value));
                if let (Some(f), Some(a)) = (risk_factor, adjusted) {
                    let _ = writeln!(out, "adjusted  {} (risk factor {f})", f3(a));
                }
            }
            if result.nonpositive {
                writeln!(err, "warning: non-positive effort estimate {}", result.value)?;
            }
            for c in &result.fallbacks {
                writeln!(err, "warning: unseen {c} level {:?} treated as reference", record.category(*c).unwrap_or(""))?;
            }
            Ok(())
        }
        Command::Gen {
            n,
            seed,
            noise,
            missing_rate,
            out: path,
        } => {
            let mut config = GeneratorConfig {
                n: *n,
                seed: *seed,
                missing_rate: *missing_rate,
                ..Default::default()
            };
            if let Some(noise) = noise {
                config.noise_sd = *noise;
            }
            let synth = generate_synthetic(&config)?;
            match path {
                Some(path) => write_projects(&synth.dataset, create(path)?)?,
                None => {
                    let mut csv = Vec::new();
                    write_projects(&synth.dataset, &mut csv)?;
                    out.push_str(&String::from_utf8(csv).expect("CSV output is UTF-8"));
                }
            }
            Ok(())
        }
    }
}

fn taxonomy(out: &mut String, kv: bool) -> Result<()> {
    let taxonomy = builtin_taxonomy();
    for dim in taxonomy.dimensions() {
        if !kv {
            let _ = writeln!(out, "{} ({})", dim.name, dim.id);
        }
        for item in taxonomy.items_in(dim.id) {
            if kv {
                let _ = writeln!(out, "risk\t{}\t{}\t{}", item.id, dim.id, item.description);
            } else {
                let _ = writeln!(out, "  {:<14} {}", item.id, item.description);
            }
        }
    }
    Ok(())
}

fn assess(out: &mut String, kv: bool, file: &Path, project: Option<&str>) -> Result<()> {
    let project = match project {
        Some(p) => p.to_owned(),
        None => file
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("project")
            .to_owned(),
    };
    let assessment = load_assessment(&project, open(file)?)?;
    let breakdown = project_risk_exposure(&assessment)?;
    if kv {
        let _ = writeln!(out, "project\t{project}");
        for d in &breakdown.dimensions {
            let _ = writeln!(out, "dimension\t{}\t{}\t{}", d.dimension.id, d.rated, opt_full(d.exposure));
        }
        let _ = writeln!(out, "pre\t{}", breakdown.pre);
        for u in &breakdown.unassessed {
            let _ = writeln!(out, "unassessed\t{u}");
        }
    } else {
        let _ = writeln!(out, "project {project}");
        let _ = writeln!(out, "{:<34} {:>5} {:>9}", "dimension", "rated", "exposure");
        for d in &breakdown.dimensions {
            let total = builtin_taxonomy().items_in(d.dimension.id).count();
            let _ = writeln!(
                out,
                "{:<34} {:>5} {:>9}",
                d.dimension.name,
                format!("{}/{total}", d.rated),
                opt3(d.exposure)
            );
        }
        let _ = writeln!(out, "PRE {}", f3(breakdown.pre));
        for u in &breakdown.unassessed {
            let _ = writeln!(out, "warning: dimension {u} unassessed, excluded from PRE");
        }
    }
    Ok(())
}

fn print_selection(out: &mut String, kv: bool, report: &SelectionReport) {
    if kv {
        for e in &report.entries {
            let key = format!("select.{}", e.driver.name());
            let _ = writeln!(out, "{key}.scale\t{}", e.driver.scale.as_str());
            let _ = writeln!(out, "{key}.test\t{}", e.test.label());
            let _ = writeln!(out, "{key}.statistic\t{}", opt_full(e.statistic));
            let _ = writeln!(out, "{key}.p_value\t{}", opt_full(e.p_value));
            let _ = writeln!(out, "{key}.n\t{}", e.n);
            let _ = writeln!(out, "{key}.selected\t{}", e.selected);
            let _ = writeln!(out, "{key}.reason\t{}", e.reason);
        }
        for w in &report.warnings {
            let _ = writeln!(out, "warning\t{w}");
        }
        return;
    }
    let _ = writeln!(
        out,
        "{:<8} {:<8} {:<14} {:>9} {:>8} {:>5}  {:<8} {}",
        "driver", "scale", "test", "r / F", "p", "n", "selected", "reason"
    );
    for e in &report.entries {
        let statistic = match e.statistic {
            Some(s) if s.is_infinite() => "inf".to_owned(),
            s => opt3(s),
        };
        let _ = writeln!(
            out,
            "{:<8} {:<8} {:<14} {:>9} {:>8} {:>5}  {:<8} {}",
            e.driver.name(),
            e.driver.scale.as_str(),
            e.test.label(),
            statistic,
            opt3(e.p_value),
            e.n,
            if e.selected { "yes" } else { "no" },
            e.reason
        );
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

fn print_preparation(out: &mut String, kv: bool, report: &PreparationReport) {
    if kv {
        let _ = writeln!(out, "prepare.input\t{}", report.input);
        for id in &report.dropped_missing {
            let _ = writeln!(out, "prepare.dropped_missing\t{id}");
        }
        for id in &report.dropped_outlier {
            let _ = writeln!(out, "prepare.dropped_outlier\t{id}");
        }
        let _ = writeln!(out, "prepare.retained\t{}", report.retained);
        if let Some((lo, hi)) = report.log_fence {
            let _ = writeln!(out, "prepare.log_fence\t{lo}\t{hi}");
        }
        return;
    }
    let _ = writeln!(
        out,
        "records: {} in, {} dropped for missing drivers, {} dropped as outliers, {} retained",
        report.input,
        report.dropped_missing.len(),
        report.dropped_outlier.len(),
        report.retained
    );
    if let Some((lo, hi)) = report.log_fence {
        let _ = writeln!(out, "effort fence: [{}, {}]", f3(lo.exp()), f3(hi.exp()));
    }
}

fn print_cv(out: &mut String, kv: bool, report: &CvReport, digest: &str) {
    let kinds = [ModelKind::Teem, ModelKind::Eemr];
    if kv {
        let _ = writeln!(out, "cv.k\t{}", report.k);
        let _ = writeln!(out, "cv.seed\t{}", report.seed);
        let _ = writeln!(out, "cv.drivers\t{}", driver_list(&report.drivers));
        let _ = writeln!(out, "cv.config_digest\t{digest}");
        let put = |out: &mut String, prefix: &str, s: &AccuracySummary| {
            let _ = writeln!(out, "{prefix}.n\t{}", s.n);
            let _ = writeln!(out, "{prefix}.mmre\t{}", s.mmre);
            let _ = writeln!(out, "{prefix}.pred25\t{}", s.pred_25);
            let _ = writeln!(out, "{prefix}.r2\t{}", s.r_squared);
            let _ = writeln!(out, "{prefix}.r2_degenerate\t{}", s.r_squared_degenerate);
        };
        for f in &report.folds {
            for kind in kinds {
                let m = f.metrics.get(kind);
                let name = kind.as_str().to_ascii_lowercase();
                put(out, &format!("fold.{}.{name}.training", f.fold), &m.training);
                put(out, &format!("fold.{}.{name}.test", f.fold), &m.test);
            }
        }
        for kind in kinds {
            let m = report.mean.get(kind);
            let name = kind.as_str().to_ascii_lowercase();
            put(out, &format!("mean.{name}.training"), &m.training);
            put(out, &format!("mean.{name}.test"), &m.test);
        }
        return;
    }
    let _ = writeln!(
        out,
        "{}-fold cross-validation, seed {}, drivers {} (EEMR adds pre), config {digest}",
        report.k,
        report.seed,
        driver_list(&report.drivers)
    );
    let _ = writeln!(out);
    let row = |out: &mut String, label: &str, kind: ModelKind, tr: &AccuracySummary, te: &AccuracySummary| {
        let _ = writeln!(
            out,
            "{:<6} {:<5} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
            label,
            kind.as_str(),
            f3(tr.mmre),
            f3(tr.pred_25),
            f3(tr.r_squared),
            f3(te.mmre),
            f3(te.pred_25),
            f3(te.r_squared)
        );
    };
    let _ = writeln!(out, "{:<12} {:>26} {:>26}", "", "training", "test");
    let _ = writeln!(
        out,
        "{:<6} {:<5} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "fold", "model", "MMRE", "Pred25", "R2", "MMRE", "Pred25", "R2"
    );
    for f in &report.folds {
        for kind in kinds {
            let m = f.metrics.get(kind);
            row(out, &f.fold.to_string(), kind, &m.training, &m.test);
        }
    }
    for kind in kinds {
        let m = report.mean.get(kind);
        row(out, "mean", kind, &m.training, &m.test);
    }
    let degenerate = report
        .folds
        .iter()
        .any(|f| kinds.iter().any(|k| f.metrics.get(*k).test.r_squared_degenerate));
    if degenerate {
        let _ = writeln!(out, "warning: R2 degenerate in at least one fold (reported as 0)");
    }
}

/// Runs the command line against the process's own arguments and streams.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
