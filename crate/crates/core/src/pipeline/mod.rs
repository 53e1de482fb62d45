//! Model generation: select drivers, prepare data, split folds, fit TEEM and
//! EEMR, estimate and validate.

mod baseline;
mod cv;
mod drivers;
mod folds;
mod metrics;
mod model;
mod prepare;
mod select;

pub use baseline::{productivity_estimate, risk_factor_adjust};
pub use cv::{
    cross_validate, run_workflow, CvConfig, CvReport, FoldReport, ModelPair, SplitMetrics, WorkflowConfig,
    WorkflowReport,
};
pub use drivers::{default_driver_specs, DriverSpec, Scale};
pub use folds::{kfold_split, FoldAssignment, DEFAULT_K};
pub use metrics::{accuracy_metrics, mre, AccuracyReport, AccuracySummary, PRED_LEVEL};
pub use model::{
    build_design, config_digest, dummy_name, estimate, fit_model, validate, Estimate, EstimateOptions, FittedModel,
    ModelKind, Provenance,
};
pub use prepare::{prepare, quantile_sorted, PreparationReport, PrepareConfig};
pub use select::{select_drivers, Reason, SelectionConfig, SelectionEntry, SelectionReport, TestKind};
