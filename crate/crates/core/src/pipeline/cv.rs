//! k-fold comparison of TEEM and EEMR, and the end-to-end workflow that
//! feeds it.

use std::thread;

use super::drivers::DriverSpec;
use super::folds::{kfold_split, DEFAULT_K};
use super::metrics::AccuracySummary;
use super::model::{config_digest, fit_model, validate, EstimateOptions, ModelKind};
use super::prepare::{prepare, PreparationReport, PrepareConfig};
use super::select::{select_drivers, SelectionConfig, SelectionReport};
use crate::dataio::{Column, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    pub k: usize,
    pub seed: u64,
    pub estimate: EstimateOptions,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            k: DEFAULT_K,
            seed: 42,
            estimate: EstimateOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitMetrics {
    pub training: AccuracySummary,
    pub test: AccuracySummary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPair<T> {
    pub teem: T,
    pub eemr: T,
}

impl<T> ModelPair<T> {
    pub fn get(&self, kind: ModelKind) -> &T {
        match kind {
            ModelKind::Teem => &self.teem,
            ModelKind::Eemr => &self.eemr,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldReport {
    pub fold: usize,
    pub train_n: usize,
    pub test_n: usize,
    pub metrics: ModelPair<SplitMetrics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub drivers: Vec<DriverSpec>,
    pub folds: Vec<FoldReport>,
    /// Fold averages. `n` is the total over folds and the degenerate flag is
    /// set if any fold was degenerate.
    pub mean: ModelPair<SplitMetrics>,
}

fn run_fold(
    dataset: &Dataset,
    drivers: &[DriverSpec],
    config: &CvConfig,
    fold: usize,
    train_idx: &[usize],
    test_idx: &[usize],
) -> Result<FoldReport> {
    let train = dataset.subset(train_idx);
    let test = dataset.subset(test_idx);
    let split = |kind| -> Result<SplitMetrics> {
        let model = fit_model(&train, drivers, kind)?;
        let test = validate(&model, &test, &config.estimate)?.summary;
        Ok(SplitMetrics {
            training: model.training,
            test,
        })
    };
    Ok(FoldReport {
        fold,
        train_n: train.len(),
        test_n: test.len(),
        metrics: ModelPair {
            teem: split(ModelKind::Teem)?,
            eemr: split(ModelKind::Eemr)?,
        },
    })
}

fn mean_summary(items: &[AccuracySummary]) -> AccuracySummary {
    let k = items.len() as f64;
    AccuracySummary {
        n: items.iter().map(|s| s.n).sum(),
        mmre: items.iter().map(|s| s.mmre).sum::<f64>() / k,
        pred_25: items.iter().map(|s| s.pred_25).sum::<f64>() / k,
        r_squared: items.iter().map(|s| s.r_squared).sum::<f64>() / k,
        r_squared_degenerate: items.iter().any(|s| s.r_squared_degenerate),
    }
}

fn mean_split(folds: &[FoldReport], kind: ModelKind) -> SplitMetrics {
    let pick = |f: &FoldReport| *f.metrics.get(kind);
    SplitMetrics {
        training: mean_summary(&folds.iter().map(|f| pick(f).training).collect::<Vec<_>>()),
        test: mean_summary(&folds.iter().map(|f| pick(f).test).collect::<Vec<_>>()),
    }
}

/// Trains TEEM and EEMR on k − 1 folds and validates both on the held-out
/// fold, for every fold. Folds run on scoped threads; results are ordered by
/// fold index.
pub fn cross_validate(dataset: &Dataset, drivers: &[DriverSpec], config: &CvConfig) -> Result<CvReport> {
    if let Some(r) = dataset.records().iter().find(|r| r.pre.is_none()) {
        return Err(Error::MissingValue {
            project: r.project_id.clone(),
            field: Column::Pre.name().to_owned(),
        });
    }
    let drivers: Vec<DriverSpec> = drivers.iter().copied().filter(|d| !d.is_pre()).collect();
    let split = kfold_split(dataset.len(), config.k, config.seed)?;

    let results: Vec<Result<FoldReport>> = thread::scope(|s| {
        let handles: Vec<_> = (0..split.k)
            .map(|fold| {
                let (train, test) = (split.train_indices(fold), split.test_indices(fold));
                let drivers = &drivers;
                s.spawn(move || run_fold(dataset, drivers, config, fold, &train, &test))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fold worker panicked"))
            .collect()
    });

    let mut folds = Vec::with_capacity(results.len());
    for (fold, r) in results.into_iter().enumerate() {
        folds.push(r.map_err(|e| Error::Fold {
            fold,
            source: Box::new(e),
        })?);
    }
    let mean = ModelPair {
        teem: mean_split(&folds, ModelKind::Teem),
        eemr: mean_split(&folds, ModelKind::Eemr),
    };
    Ok(CvReport {
        k: split.k,
        seed: config.seed,
        drivers,
        folds,
        mean,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WorkflowConfig {
    pub selection: SelectionConfig,
    pub prepare: PrepareConfig,
    pub cv: CvConfig,
}

impl WorkflowConfig {
    /// Digest of every setting that influences the workflow's output.
    pub fn digest(&self, drivers: &[DriverSpec]) -> String {
        let list = |cols: &[Column]| cols.iter().map(|c| c.name()).collect::<Vec<_>>().join(",");
        config_digest(&format!(
            "drivers={};r={};alpha={};in={};out={};fence={};k={};seed={};fallback={}",
            drivers.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
            self.selection.r_threshold,
            self.selection.alpha,
            list(&self.selection.force_include),
            list(&self.selection.force_exclude),
            self.prepare.fence_multiplier,
            self.cv.k,
            self.cv.seed,
            self.cv.estimate.unseen_level_fallback,
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkflowReport {
    pub selection: SelectionReport,
    pub preparation: PreparationReport,
    pub prepared: Dataset,
    pub cv: CvReport,
}

/// Selection, preparation over the selected drivers plus PRE, then
/// cross-validation of both model kinds.
pub fn run_workflow(dataset: &Dataset, specs: &[DriverSpec], config: &WorkflowConfig) -> Result<WorkflowReport> {
    let selection = select_drivers(dataset, specs, &config.selection)?;
    let drivers: Vec<DriverSpec> = selection.selected().into_iter().filter(|d| !d.is_pre()).collect();
    let mut required = drivers.clone();
    required.push(DriverSpec::for_column(Column::Pre));
    let (prepared, preparation) = prepare(dataset, &required, &config.prepare)?;
    let cv = cross_validate(&prepared, &drivers, &config.cv)?;
    Ok(WorkflowReport {
        selection,
        preparation,
        prepared,
        cv,
    })
}
