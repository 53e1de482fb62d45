//! Rate a handful of risks for one project and score its risk exposure.
//!
//! ```bash
//! cargo run -p riskest --example risk_assessment
//! ```

use riskest::dataio::{load_assessment, write_assessment};
use riskest::riskmodel::{builtin_taxonomy, project_risk_exposure, risk_exposure, DOD_SCALE};

const RATINGS: &str = "\
risk_id,probability,technical,cost,schedule,team
# users
user.1,3,2,4,3,3
user.4,2,2,2,3,1
# requirements
requirement.1,4,3,4,4,2
requirement.3,3,3,3,2,2
complexity.2,2,4,3,2,2
planning.1,4,2,3,5,3
planning.5,3,2,2,4,2
team.1,2,3,2,2,4
org_env.2,1,1,2,2,1
";

fn main() -> riskest::Result<()> {
    println!("DoD probability levels:");
    for row in &DOD_SCALE {
        println!("  {}  {}", row.level, row.probability);
    }

    let assessment = load_assessment("billing-rewrite", RATINGS.as_bytes())?;
    println!("\n{} ratings for {}", assessment.ratings().len(), assessment.project);
    for rating in assessment.ratings() {
        let item = builtin_taxonomy().item(&rating.risk).expect("validated on load");
        println!("  {:<14} {:>6.2}  {}", rating.risk, risk_exposure(rating)?, item.description);
    }

    let breakdown = project_risk_exposure(&assessment)?;
    println!();
    for d in &breakdown.dimensions {
        match d.exposure {
            Some(e) => println!("  {:<36} {:>6.3}", d.dimension.name, e),
            None => println!("  {:<36} {:>6}", d.dimension.name, "-"),
        }
    }
    println!("PRE = {:.3}", breakdown.pre);

    println!("\nround-tripped file:");
    write_assessment(&assessment, std::io::stdout().lock())?;
    Ok(())
}
