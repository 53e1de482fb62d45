//! The full workflow on the default synthetic database: select drivers,
//! prepare the data, and compare TEEM with EEMR by 3-fold cross-validation.
//!
//! ```bash
//! cargo run -p riskest --example cross_validation
//! ```

use riskest::dataio::{generate_synthetic, GeneratorConfig};
use riskest::pipeline::{default_driver_specs, run_workflow, AccuracySummary, WorkflowConfig};

fn row(label: &str, s: &AccuracySummary) {
    println!("{label:<16} {:>7.3} {:>7.3} {:>7.3}", s.mmre, s.pred_25, s.r_squared);
}

fn main() -> riskest::Result<()> {
    let synth = generate_synthetic(&GeneratorConfig::default())?;
    let report = run_workflow(&synth.dataset, &default_driver_specs(), &WorkflowConfig::default())?;

    let names: Vec<_> = report.cv.drivers.iter().map(|d| d.name()).collect();
    println!("drivers: {}", names.join(", "));
    println!(
        "records: {} in, {} missing, {} outliers, {} used",
        report.preparation.input,
        report.preparation.dropped_missing.len(),
        report.preparation.dropped_outlier.len(),
        report.preparation.retained
    );

    println!("\n{:<16} {:>7} {:>7} {:>7}", "", "MMRE", "Pred25", "R2");
    for f in &report.cv.folds {
        row(&format!("fold {} TEEM", f.fold), &f.metrics.teem.test);
        row(&format!("fold {} EEMR", f.fold), &f.metrics.eemr.test);
    }
    let mean = &report.cv.mean;
    row("TEEM training", &mean.teem.training);
    row("TEEM test", &mean.teem.test);
    row("EEMR training", &mean.eemr.training);
    row("EEMR test", &mean.eemr.test);
    Ok(())
}
