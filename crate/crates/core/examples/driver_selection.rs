//! Test the eight candidate drivers plus PRE against effort, then again with
//! the selection forced to a fixed driver set.
//!
//! ```bash
//! cargo run -p riskest --example driver_selection
//! ```

use riskest::dataio::{generate_synthetic, Column, GeneratorConfig};
use riskest::pipeline::{default_driver_specs, select_drivers, SelectionConfig, SelectionReport};

fn show(report: &SelectionReport) {
    println!("{:<6} {:<14} {:>8} {:>8}  selected", "driver", "test", "r / F", "p");
    for e in &report.entries {
        let fmt = |v: Option<f64>| v.map_or("-".to_owned(), |v| format!("{v:.3}"));
        println!(
            "{:<6} {:<14} {:>8} {:>8}  {} ({})",
            e.driver.name(),
            e.test.label(),
            fmt(e.statistic),
            fmt(e.p_value),
            if e.selected { "yes" } else { "no" },
            e.reason
        );
    }
}

fn main() -> riskest::Result<()> {
    let synth = generate_synthetic(&GeneratorConfig::default())?;
    let specs = default_driver_specs();

    let report = select_drivers(&synth.dataset, &specs, &SelectionConfig::default())?;
    show(&report);

    let forced = SelectionConfig {
        force_include: vec![Column::Fs, Column::Mts, Column::Lt, Column::Ma, Column::Pre],
        force_exclude: vec![Column::Dt, Column::Dp, Column::Um, Column::At],
        ..Default::default()
    };
    println!("\nwith overrides:");
    show(&select_drivers(&synth.dataset, &specs, &forced)?);
    Ok(())
}
