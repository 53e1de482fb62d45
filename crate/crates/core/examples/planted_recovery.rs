//! Fit EEMR on noiseless synthetic data and compare every coefficient with
//! the law the generator planted.
//!
//! ```bash
//! cargo run -p riskest --example planted_recovery
//! ```

use riskest::dataio::{generate_synthetic, GeneratorConfig};
use riskest::pipeline::{fit_model, DriverSpec, ModelKind};

fn main() -> riskest::Result<()> {
    let synth = generate_synthetic(&GeneratorConfig {
        noise_sd: 0.0,
        ..Default::default()
    })?;
    let drivers: Vec<DriverSpec> = ["fs", "mts", "lt", "ma"].iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let model = fit_model(&synth.dataset, &drivers, ModelKind::Eemr)?;
    let (intercept, expected) = synth.planted.expected_coefficients(&model.reference_levels)?;

    println!("{:<14} {:>14} {:>14}", "term", "planted", "fitted");
    println!("{:<14} {:>14.6} {:>14.6}", "intercept", intercept, model.intercept);
    for (name, value) in &model.coefficients {
        println!("{:<14} {:>14.6} {:>14.6}", name, expected[name], value);
    }
    println!("training MMRE {:.2e}, R2 {:.12}", model.training.mmre, model.training.r_squared);
    Ok(())
}
