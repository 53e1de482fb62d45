//! Drive the `riskest` command line in-process: generate a database, then
//! cross-validate it. Equivalent to
//!
//! ```bash
//! riskest gen --seed 42 --out synth.csv
//! riskest cross-validate --data synth.csv --k 3 --seed 42
//! ```
//!
//! ```bash
//! cargo run -p riskest --example cli_workflow
//! ```

use std::io;

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let data = dir.path().join("synth.csv");
    let data = data.to_str().expect("utf-8 path");

    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    for argv in [
        vec!["riskest", "gen", "--seed", "42", "--out", data],
        vec!["riskest", "cross-validate", "--data", data, "--k", "3", "--seed", "42"],
    ] {
        let code = riskest::cli::run(argv, &mut stdout, &mut stderr);
        if code != 0 {
            std::process::exit(code);
        }
    }
}
