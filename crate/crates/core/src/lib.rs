//! Software effort estimation that integrates project risk exposure.
//!
//! The crate covers the whole model-generation workflow over a historical
//! project database:
//!
//! - [`riskmodel`] - the 27-risk / 6-dimension checklist, DoD probability and
//!   impact levels, and project risk exposure (PRE) scoring
//! - [`statcore`] - incomplete beta, t and F tails, Pearson correlation,
//!   one-way ANOVA, dummy encoding and QR-based least squares
//! - [`pipeline`] - driver selection, data preparation, k-fold splitting,
//!   fitting of the traditional (TEEM) and risk-integrated (EEMR) models,
//!   estimation and accuracy metrics (MRE, MMRE, Pred(0.25), R²)
//! - [`dataio`] - project CSV and risk-assessment readers, the
//!   `eemr-model/1` model file, and a seeded synthetic database generator
//! - [`cli`] - the `riskest` command line front end
//!
//! Runnable walkthroughs live in `crates/core/examples/`:
//!
//! ```bash
//! cargo run -p riskest --example risk_assessment
//! cargo run -p riskest --example driver_selection
//! cargo run -p riskest --example cross_validation
//! ```
//!
//! # Example
//!
//! ```
//! use riskest::dataio::{generate_synthetic, GeneratorConfig};
//! use riskest::pipeline::{run_workflow, default_driver_specs, WorkflowConfig};
//!
//! let synth = generate_synthetic(&GeneratorConfig::default())?;
//! let report = run_workflow(&synth.dataset, &default_driver_specs(), &WorkflowConfig::default())?;
//! assert!(report.cv.mean.eemr.test.mmre < report.cv.mean.teem.test.mmre);
//! # Ok::<(), riskest::Error>(())
//! ```

pub mod cli;
pub mod dataio;
pub mod error;
pub mod pipeline;
pub mod riskmodel;
pub mod statcore;

pub use error::{Error, Result};
