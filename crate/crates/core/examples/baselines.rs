//! The two simple estimators the regression models improve on: size times a
//! productivity rate, and an estimate inflated by a flat risk factor.
//!
//! ```bash
//! cargo run -p riskest --example baselines
//! ```

use riskest::pipeline::{productivity_estimate, risk_factor_adjust};

fn main() -> riskest::Result<()> {
    let base = productivity_estimate(250.0, 8.5)?;
    println!("250 FP at 8.5 h/FP: {base} hours");
    for factor in [1.0, 1.1, 1.3, 1.6] {
        println!("  risk factor {factor:.1}: {:.0} hours", risk_factor_adjust(base, factor)?);
    }
    match risk_factor_adjust(base, 0.8) {
        Ok(_) => unreachable!(),
        Err(e) => println!("factor 0.8 rejected: {e}"),
    }
    Ok(())
}
