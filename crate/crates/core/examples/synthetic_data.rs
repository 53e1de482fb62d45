//! Generate a synthetic project database and print its CSV form with a few
//! summary figures.
//!
//! ```bash
//! cargo run -p riskest --example synthetic_data
//! ```

use riskest::dataio::{generate_synthetic, projects_to_string, GeneratorConfig};
use riskest::statcore::correlation;

fn main() -> riskest::Result<()> {
    let config = GeneratorConfig {
        n: 12,
        seed: 7,
        missing_rate: 0.05,
        ..Default::default()
    };
    let synth = generate_synthetic(&config)?;
    print!("{}", projects_to_string(&synth.dataset)?);

    let full = generate_synthetic(&GeneratorConfig::default())?;
    let efforts = full.dataset.efforts();
    let pre: Vec<f64> = full.dataset.records().iter().map(|r| r.pre.unwrap_or(f64::NAN)).collect();
    println!(
        "\ndefault config: {} projects, mean effort {:.1}, r(pre, effort) = {:.3}",
        full.dataset.len(),
        efforts.iter().sum::<f64>() / efforts.len() as f64,
        correlation(&pre, &efforts).unwrap_or(f64::NAN)
    );
    println!("planted: {:?}", full.planted);
    Ok(())
}
