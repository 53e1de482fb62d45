use std::fs;
use std::path::Path;

use riskest::cli::run;

fn riskest(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["riskest"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn all_level(level: u8) -> String {
    let mut text = String::from("risk_id,probability,technical,cost,schedule,team\n");
    for item in riskest::riskmodel::builtin_taxonomy().items() {
        text.push_str(&format!("{},{level},{level},{level},{level},{level}\n", item.id));
    }
    text
}

#[test]
fn assess_minimal_and_maximal() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p1.csv");
    fs::write(&file, all_level(1)).unwrap();
    let (code, out, _) = riskest(&["assess", path(&file)]);
    assert_eq!(code, 0);
    assert!(out.contains("PRE 1.000"), "{out}");

    fs::write(&file, all_level(5)).unwrap();
    let (code, out, _) = riskest(&["--kv", "assess", path(&file)]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "pre\t25"), "{out}");
}

#[test]
fn assess_reports_line_of_bad_rating() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p1.csv");
    fs::write(&file, "user.1,3,2,4,3,3\nuser.99,1,1,1,1,1\n").unwrap();
    let (code, _, err) = riskest(&["assess", path(&file)]);
    assert_eq!(code, 2);
    let first = err.lines().next().unwrap();
    assert!(first.starts_with("error[data]: parse: line 2"), "{first}");
    assert!(first.contains("unknown risk id"));
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = riskest(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error[usage]: "), "{err}");
    assert!(err.contains("Usage"));

    let (code, _, err) = riskest(&["gen", "--bogus"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error[usage]: "));

    let (code, out, _) = riskest(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("cross-validate"));
}

#[test]
fn estimate_with_missing_files_exits_two() {
    let (code, out, err) = riskest(&["estimate", "--model", "/nonexistent/m.txt", "--project", "/nonexistent/p.csv"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error[data]: io: /nonexistent/m.txt"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn taxonomy_lists_every_risk() {
    let (code, out, _) = riskest(&["--kv", "taxonomy"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("risk\t")).count(), 27);
    assert!(out.contains("risk\torg_env.4\t"));
}

#[test]
fn end_to_end_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("synth.csv");
    let clean = dir.path().join("clean.csv");
    let model = dir.path().join("model.txt");
    let project = dir.path().join("project.csv");

    assert_eq!(riskest(&["gen", "--seed", "42", "--out", path(&data)]).0, 0);

    let (code, out, _) = riskest(&["select", "--data", path(&data)]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("pre ") && l.contains("yes")), "{out}");

    let (code, out, _) = riskest(&["prepare", "--data", path(&data), "--out", path(&clean)]);
    assert_eq!(code, 0);
    assert!(out.contains("dropped as outliers"), "{out}");

    let (code, out, _) = riskest(&["fit", "--data", path(&clean), "--kind", "eemr", "--out", path(&model)]);
    assert_eq!(code, 0, "{out}");
    assert!(fs::read_to_string(&model).unwrap().starts_with("format\teemr-model/1\n"));

    fs::write(
        &project,
        "project_id,effort,fs,mts,dt,dp,lt,um,ma,at,pre\nX1,1,300,6,New,PC,4GL,Yes,Purchased,MIS,\n",
    )
    .unwrap();
    let assessment = dir.path().join("X1.csv");
    fs::write(&assessment, all_level(2)).unwrap();
    let (code, out, err) = riskest(&[
        "--kv",
        "estimate",
        "--model",
        path(&model),
        "--project",
        path(&project),
        "--assessment",
        path(&assessment),
        "--risk-factor",
        "1.25",
    ]);
    assert_eq!(code, 0, "{err}");
    let value = |key: &str| -> f64 {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}\t")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(value("estimate") > 0.0);
    assert!((value("adjusted") - 1.25 * value("estimate")).abs() < 1e-9);

    // PRE missing and no assessment: EEMR cannot estimate.
    let (code, _, err) = riskest(&["estimate", "--model", path(&model), "--project", path(&project)]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[data]: missing-value"), "{err}");
}

#[test]
fn cross_validate_table_orders_eemr_first() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("synth.csv");
    assert_eq!(riskest(&["gen", "--seed", "42", "--out", path(&data)]).0, 0);
    let (code, out, _) = riskest(&["--kv", "cross-validate", "--data", path(&data), "--k", "3", "--seed", "42"]);
    assert_eq!(code, 0);
    let get = |key: &str| -> f64 {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}\t")))
            .unwrap_or_else(|| panic!("{key} missing"))
            .parse()
            .unwrap()
    };
    assert!(get("mean.eemr.test.mmre") < get("mean.teem.test.mmre"));
    assert!(get("mean.eemr.test.pred25") > get("mean.teem.test.pred25"));
    assert!(get("mean.eemr.test.r2") > get("mean.teem.test.r2"));
    assert_eq!(out.lines().filter(|l| l.ends_with(".eemr.test.n\t63") || l.ends_with(".eemr.test.n\t64")).count(), 3);

    let (_, again, _) = riskest(&["--kv", "cross-validate", "--data", path(&data), "--k", "3", "--seed", "42"]);
    assert_eq!(out, again);
    let (_, other, _) = riskest(&["--kv", "cross-validate", "--data", path(&data), "--k", "3", "--seed", "7"]);
    assert_ne!(out, other);
}

#[test]
fn assessments_directory_supplies_pre() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let assessments = dir.path().join("risks");
    fs::create_dir(&assessments).unwrap();
    let mut csv = String::from("project_id,effort,fs,mts,dt,dp,lt,um,ma,at,pre\n");
    for i in 0..12 {
        csv.push_str(&format!("P{i},{},{},3,New,PC,3GL,Yes,Developed,MIS,\n", 50 + 10 * i, 100 + 7 * i));
        let level = 1 + (i % 5) as u8;
        fs::write(assessments.join(format!("P{i}.csv")), all_level(level)).unwrap();
    }
    fs::write(&data, csv).unwrap();
    let (code, out, err) = riskest(&[
        "--kv",
        "select",
        "--data",
        path(&data),
        "--assessments",
        path(&assessments),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("select.pre.n\t12"), "{out}");

    fs::write(assessments.join("P99.csv"), all_level(1)).unwrap();
    let (code, _, err) = riskest(&["select", "--data", path(&data), "--assessments", path(&assessments)]);
    assert_eq!(code, 2);
    assert!(err.contains("P99"));
}

#[test]
fn gen_is_seeded() {
    let (_, a, _) = riskest(&["gen", "--n", "20", "--seed", "5"]);
    let (_, b, _) = riskest(&["gen", "--n", "20", "--seed", "5"]);
    let (_, c, _) = riskest(&["gen", "--n", "20", "--seed", "6"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 21);
    let (code, _, err) = riskest(&["gen", "--n", "5"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[data]: invalid"));
}
