//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use riskest::dataio::{
    generate_synthetic, load_model, load_projects, model_to_string, projects_to_string, Column, GeneratorConfig,
};
use riskest::pipeline::{
    accuracy_metrics, default_driver_specs, fit_model, kfold_split, run_workflow, DriverSpec, ModelKind,
    WorkflowConfig,
};
use riskest::riskmodel::{
    builtin_taxonomy, project_risk_exposure, uniform_assessment, ImpactVector, Level, RiskAssessment, RiskRating,
};
use riskest::statcore::{f_pvalue, one_way_anova, ols, pearson, reg_inc_beta, t_pvalue, DesignMatrix};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(what: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    check((got - want).abs() <= tol, || format!("{what}: got {got}, want {want} (tol {tol:e})"))
}

fn within(what: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn statistical_oracles() -> Outcome {
    let start = Instant::now();
    let e = |e: riskest::Error| e.to_string();

    let r = pearson(&[1.0, 2.0, 3.0], &[6.0, 4.0, 5.0]).map_err(e)?;
    close("pearson r", r.statistic, -0.5, 1e-9)?;
    // Independent reference: two-sided Student t tail from statrs.
    let t = -0.5 * (1.0f64 / 0.75).sqrt();
    let t_ref = 2.0 * StudentsT::new(0.0, 1.0, 1.0).unwrap().sf(t.abs());
    close("pearson p", r.p_value, t_ref, 1e-6)?;

    let a = one_way_anova(&[vec![1.0, 2.0, 3.0], vec![2.0, 3.0, 4.0]]).map_err(e)?;
    close("anova F", a.statistic, 1.5, 1e-9)?;
    check(a.df1 == 1 && a.df2 == Some(4), || format!("anova df ({}, {:?})", a.df1, a.df2))?;
    let f_ref = FisherSnedecor::new(1.0, 4.0).unwrap().sf(1.5);
    close("anova p", a.p_value, f_ref, 1e-6)?;

    let x = DesignMatrix::from_columns(3, vec![("x".into(), vec![1.0, 2.0, 3.0])]).map_err(e)?;
    let fit = ols(&x, &[1.0, 2.0, 2.0]).map_err(e)?;
    close("ols intercept", fit.intercept, 2.0 / 3.0, 1e-9)?;
    close("ols slope", fit.coefficient("x").unwrap_or(f64::NAN), 0.5, 1e-9)?;
    close("ols R2", fit.r_squared, 0.75, 1e-9)?;

    within("oracle suite", start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("r=-0.5 F=1.5 OLS(2/3, 0.5, 0.75); p {:.6} / {:.6}", r.p_value, a.p_value))
}

fn special_functions() -> Outcome {
    let e = |e: riskest::Error| e.to_string();
    let params = [0.5, 1.0, 2.0, 5.0, 10.0];
    let mut worst = 0.0f64;
    for i in 1..=99 {
        let x = i as f64 / 100.0;
        close("I_x(1,1)", reg_inc_beta(x, 1.0, 1.0).map_err(e)?, x, 1e-10)?;
        for &a in &params {
            for &b in &params {
                let sum = reg_inc_beta(x, a, b).map_err(e)? + reg_inc_beta(1.0 - x, b, a).map_err(e)?;
                worst = worst.max((sum - 1.0).abs());
                close(&format!("I_{x}({a},{b}) + I_(1-x)({b},{a})"), sum, 1.0, 1e-10)?;
            }
        }
    }
    let mut worst_tf = 0.0f64;
    for df in 1..=30 {
        for i in 1..=50 {
            let t = i as f64 / 10.0;
            let (fp, tp) = (f_pvalue(t * t, 1, df).map_err(e)?, t_pvalue(t, df).map_err(e)?);
            worst_tf = worst_tf.max((fp - tp).abs());
            close(&format!("f_pvalue({t}^2, 1, {df}) vs t_pvalue"), fp, tp, 1e-9)?;
        }
    }
    Ok(format!("max symmetry error {worst:.1e}, max F/t gap {worst_tf:.1e}"))
}

fn random_assessment(rng: &mut ChaCha8Rng, id: usize) -> Result<RiskAssessment, String> {
    let level = |rng: &mut ChaCha8Rng| Level::new(rng.random_range(1..=5)).map_err(|e| e.to_string());
    let mut a = RiskAssessment::new(format!("a{id}"));
    let items = builtin_taxonomy().items();
    let keep = rng.random_range(1..=items.len());
    for item in items.iter().take(keep) {
        let impact = ImpactVector {
            technical: level(rng)?,
            cost: level(rng)?,
            schedule: level(rng)?,
            team: level(rng)?,
        };
        let rating = RiskRating::new(item.id, level(rng)?, impact).map_err(|e| e.to_string())?;
        a.add(rating).map_err(|e| e.to_string())?;
    }
    Ok(a)
}

fn pre_laws() -> Outcome {
    let pre = |a: &RiskAssessment| project_risk_exposure(a).map(|b| b.pre).map_err(|e| e.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..1000 {
        let a = random_assessment(&mut rng, i)?;
        let base = pre(&a)?;
        check((1.0..=25.0).contains(&base), || format!("PRE {base} outside [1, 25]"))?;

        let pick = rng.random_range(0..a.ratings().len());
        let id = a.ratings()[pick].risk.clone();
        for component in 0..5 {
            let mut raised = a.clone();
            let r = raised.rating_mut(&id).expect("rating present");
            let slot = match component {
                0 => &mut r.probability,
                1 => &mut r.impact.technical,
                2 => &mut r.impact.cost,
                3 => &mut r.impact.schedule,
                _ => &mut r.impact.team,
            };
            let Some(up) = slot.raised() else { continue };
            *slot = up;
            let after = pre(&raised)?;
            check(after >= base, || format!("raising {id} component {component}: {base} -> {after}"))?;
        }
    }
    let (min, max) = (Level::new(1).unwrap(), Level::new(5).unwrap());
    let lo = pre(&uniform_assessment("min", min, ImpactVector::uniform(min)))?;
    let hi = pre(&uniform_assessment("max", max, ImpactVector::uniform(max)))?;
    check(lo == 1.0 && hi == 25.0, || format!("extremes {lo}, {hi}"))?;
    Ok("1000 assessments bounded and monotone; extremes 1.0 and 25.0".into())
}

fn metric_definitions() -> Outcome {
    let e = |e: riskest::Error| e.to_string();
    let r = accuracy_metrics(&[100.0], &[50.0]).map_err(e)?;
    check(r.mre == vec![0.5], || format!("MRE {:?}", r.mre))?;

    let r = accuracy_metrics(&[100.0, 200.0, 300.0], &[110.0, 260.0, 240.0]).map_err(e)?;
    for (got, want) in r.mre.iter().zip([0.1, 0.3, 0.2]) {
        close("MRE", *got, want, 1e-15)?;
    }
    close("MMRE", r.mmre(), 0.2, 1e-15)?;
    close("Pred(0.25)", r.pred_25(), 2.0 / 3.0, 1e-15)?;

    let y = [12.0, 40.0, 7.5, 300.0];
    let p = accuracy_metrics(&y, &y).map_err(e)?;
    check(p.mmre() == 0.0 && p.pred_25() == 1.0, || format!("perfect: {:?}", p.summary))?;
    close("perfect R2", p.r_squared(), 1.0, 1e-15)?;
    Ok("MRE examples and perfect estimator reproduced".into())
}

fn fold_laws() -> Outcome {
    let mut sizes = Vec::new();
    for n in [10, 168, 1000] {
        for seed in [0u64, 42, 12345] {
            let f = kfold_split(n, 3, seed).map_err(|e| e.to_string())?;
            check(f == kfold_split(n, 3, seed).unwrap(), || format!("n={n} seed={seed} not deterministic"))?;
            let s = f.fold_sizes();
            check(s.iter().sum::<usize>() == n, || format!("n={n}: sizes {s:?}"))?;
            check(s.iter().max().unwrap() - s.iter().min().unwrap() <= 1, || format!("n={n}: sizes {s:?}"))?;
            let mut seen = vec![0; n];
            for fold in 0..3 {
                for i in f.test_indices(fold) {
                    seen[i] += 1;
                }
                let train = f.train_indices(fold);
                check(train.iter().all(|i| f.assignment[*i] != fold), || "train overlaps test".into())?;
            }
            check(seen.iter().all(|c| *c == 1), || format!("n={n}: not a partition"))?;
            if seed == 42 {
                sizes.push(format!("{n}->{s:?}"));
            }
        }
    }
    check(kfold_split(168, 3, 7).unwrap().fold_sizes() == vec![56, 56, 56], || "168 not 56/56/56".into())?;
    Ok(sizes.join(" "))
}

fn planted_recovery() -> Outcome {
    let e = |e: riskest::Error| e.to_string();
    let synth = generate_synthetic(&GeneratorConfig {
        noise_sd: 0.0,
        ..Default::default()
    })
    .map_err(e)?;
    let drivers: Vec<DriverSpec> = ["fs", "mts", "lt", "ma"].iter().map(|s| s.parse().unwrap()).collect();
    let model = fit_model(&synth.dataset, &drivers, ModelKind::Eemr).map_err(e)?;
    let (intercept, expected) = synth.planted.expected_coefficients(&model.reference_levels).map_err(e)?;
    let rel = |got: f64, want: f64| (got - want).abs() / want.abs();
    let mut worst = rel(model.intercept, intercept);
    check(model.coefficients.len() == expected.len() - usize::from(!expected.contains_key("pre")), || {
        "coefficient count".into()
    })?;
    for (name, got) in &model.coefficients {
        let want = *expected.get(name).ok_or_else(|| format!("unexpected coefficient {name}"))?;
        worst = worst.max(rel(*got, want));
    }
    check(worst < 1e-8, || format!("worst relative coefficient error {worst:e}"))?;
    check(model.training.mmre < 1e-9, || format!("training MMRE {:e}", model.training.mmre))?;
    Ok(format!("worst relative error {worst:.1e}, training MMRE {:.1e}", model.training.mmre))
}

fn eemr_beats_teem() -> Outcome {
    let start = Instant::now();
    let e = |e: riskest::Error| e.to_string();
    let synth = generate_synthetic(&GeneratorConfig::default()).map_err(e)?;
    let report = run_workflow(&synth.dataset, &default_driver_specs(), &WorkflowConfig::default()).map_err(e)?;
    let (teem, eemr) = (report.cv.mean.teem.test, report.cv.mean.eemr.test);
    check(eemr.mmre <= teem.mmre - 0.03, || format!("MMRE EEMR {:.4} vs TEEM {:.4}", eemr.mmre, teem.mmre))?;
    check(eemr.pred_25 >= teem.pred_25 + 0.05, || {
        format!("Pred EEMR {:.4} vs TEEM {:.4}", eemr.pred_25, teem.pred_25)
    })?;
    check(eemr.r_squared > teem.r_squared, || {
        format!("R2 EEMR {:.4} vs TEEM {:.4}", eemr.r_squared, teem.r_squared)
    })?;
    within("cross-validation", start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "MMRE {:.3} vs {:.3}, Pred {:.3} vs {:.3}, R2 {:.3} vs {:.3}",
        eemr.mmre, teem.mmre, eemr.pred_25, teem.pred_25, eemr.r_squared, teem.r_squared
    ))
}

fn persistence() -> Outcome {
    let e = |e: riskest::Error| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pool = default_driver_specs();
    for i in 0..100 {
        let synth = generate_synthetic(&GeneratorConfig {
            n: 40,
            seed: i,
            noise_sd: rng.random_range(0.0..60.0),
            ..Default::default()
        })
        .map_err(e)?;
        let drivers: Vec<DriverSpec> = pool.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        let kind = if rng.random_bool(0.5) { ModelKind::Eemr } else { ModelKind::Teem };
        let model = fit_model(&synth.dataset, &drivers, kind).map_err(e)?.with_provenance(
            rng.random_bool(0.5).then(|| rng.random()),
            rng.random_bool(0.5).then(|| rng.random_range(0..10)),
            format!("{:016x}", rng.random::<u64>()),
        );
        let text = model_to_string(&model).map_err(e)?;
        let back = load_model(text.as_bytes()).map_err(e)?;
        check(back == model, || format!("model {i} changed on round trip"))?;
    }

    let synth = generate_synthetic(&GeneratorConfig {
        missing_rate: 0.1,
        ..Default::default()
    })
    .map_err(e)?;
    let text = projects_to_string(&synth.dataset).map_err(e)?;
    let parsed = load_projects(text.as_bytes()).map_err(e)?;
    check(parsed == synth.dataset, || "dataset changed on parse".into())?;
    check(projects_to_string(&parsed).map_err(e)? == text, || "re-serialized text differs".into())?;
    let missing: usize = Column::ALL
        .iter()
        .map(|c| parsed.records().iter().filter(|r| !r.has(*c)).count())
        .sum();
    Ok(format!("100 models identical after reload; {} records, {missing} empty cells preserved", parsed.len()))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("synth.csv");
    let bin = env!("CARGO_BIN_EXE_riskest");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin)
            .args(args)
            .env_remove("RISKEST_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        check(out.status.success(), || {
            format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        Ok(out.stdout)
    };
    let data = data.to_str().ok_or("non-UTF-8 temp path")?;
    run(&["gen", "--seed", "42", "--out", data])?;
    let argv = ["cross-validate", "--data", data, "--k", "3", "--seed", "42"];
    let first = run(&argv)?;
    let second = run(&argv)?;
    check(!first.is_empty() && first == second, || "stdout differs between runs".into())?;
    let kv = ["--kv", "cross-validate", "--data", data, "--k", "3", "--seed", "42"];
    check(run(&kv)? == run(&kv)?, || "--kv stdout differs between runs".into())?;
    Ok(format!("{} identical bytes", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("statistical oracle suite", statistical_oracles),
        ("special-function identities", special_functions),
        ("PRE laws", pre_laws),
        ("metric definitions", metric_definitions),
        ("fold laws", fold_laws),
        ("planted-model recovery", planted_recovery),
        ("TEEM vs EEMR direction", eemr_beats_teem),
        ("persistence round trip", persistence),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = f();
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = outcome.unwrap_or_else(|e| e);
        println!("{status} {:>2}. {name}: {detail}", i + 1);
        failed += usize::from(status == "FAIL");
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
