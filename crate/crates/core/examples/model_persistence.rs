//! Fit a model, save it in the `eemr-model/1` format, load it back and
//! estimate a new project with it.
//!
//! ```bash
//! cargo run -p riskest --example model_persistence
//! ```

use riskest::dataio::{generate_synthetic, load_model, model_to_string, GeneratorConfig, ProjectRecord};
use riskest::pipeline::{
    estimate, fit_model, prepare, risk_factor_adjust, DriverSpec, EstimateOptions, ModelKind, PrepareConfig,
};

fn main() -> riskest::Result<()> {
    let synth = generate_synthetic(&GeneratorConfig::default())?;
    let drivers: Vec<DriverSpec> = ["fs", "mts", "lt", "ma"].iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let mut required = drivers.clone();
    required.push("pre".parse()?);
    let (clean, report) = prepare(&synth.dataset, &required, &PrepareConfig::default())?;
    eprintln!("{} of {} projects kept", report.retained, report.input);
    let model = fit_model(&clean, &drivers, ModelKind::Eemr)?;

    let text = model_to_string(&model)?;
    print!("{text}");
    let loaded = load_model(text.as_bytes())?;
    assert_eq!(loaded, model);

    let mut project = ProjectRecord::new("new-project", 1.0);
    project.fs = Some(320.0);
    project.mts = Some(6.0);
    project.lt = Some("4GL".into());
    project.ma = Some("Developed".into());
    project.pre = Some(7.5);
    let e = estimate(&loaded, &project, &EstimateOptions::default())?;
    println!("\nestimate {:.1}, with a 1.2 risk factor {:.1}", e.value, risk_factor_adjust(e.value, 1.2)?);
    Ok(())
}
