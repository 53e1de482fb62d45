use std::collections::BTreeMap;

use proptest::prelude::*;

use riskest::dataio::{load_model, load_projects, model_to_string, projects_to_string, Column, Dataset, ProjectRecord};
use riskest::pipeline::{AccuracySummary, DriverSpec, FittedModel, ModelKind, Provenance};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e6f64..1e6,
        Just(0.0),
        Just(-0.0),
    ]
}

fn label() -> impl Strategy<Value = String> {
    "[A-Za-z0-9][A-Za-z0-9 ._/-]{0,11}"
}

prop_compose! {
    fn model()(
        kind in prop_oneof![Just(ModelKind::Teem), Just(ModelKind::Eemr)],
        mask in 0u16..256,
        refs in prop::collection::vec(label(), 6),
        intercept in finite(),
        coefs in prop::collection::vec((label(), finite()), 0..8),
        n in 0usize..10_000,
        metrics in (finite(), 0.0f64..=1.0, 0.0f64..=1.0, any::<bool>()),
        seed in prop::option::of(any::<u64>()),
        fold in prop::option::of(0usize..20),
        digest in "[0-9a-f]{0,16}",
        created in any::<u64>(),
    ) -> FittedModel {
        let all = riskest::pipeline::default_driver_specs();
        let drivers: Vec<DriverSpec> = all.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, d)| *d).collect();
        let reference_levels: BTreeMap<Column, String> = drivers
            .iter()
            .filter(|d| !d.column.is_numeric())
            .enumerate()
            .map(|(i, d)| (d.column, refs[i].clone()))
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        let coefficients = coefs.into_iter().filter(|(n, _)| seen.insert(n.clone())).collect();
        FittedModel {
            kind,
            drivers,
            reference_levels,
            intercept,
            coefficients,
            training: AccuracySummary { n, mmre: metrics.0.abs(), pred_25: metrics.1, r_squared: metrics.2, r_squared_degenerate: metrics.3 },
            provenance: Provenance { seed, fold, config_digest: digest, created_unix: created },
        }
    }
}

prop_compose! {
    fn record(id: usize)(
        effort in 1e-6f64..1e7,
        fs in prop::option::of(1e-3f64..1e5),
        mts in prop::option::of(1.0f64..100.0),
        cats in prop::collection::vec(prop::option::of(label()), 6),
        pre in prop::option::of(1.0f64..=25.0),
    ) -> ProjectRecord {
        let mut r = ProjectRecord::new(format!("P{id}"), effort);
        r.fs = fs;
        r.mts = mts;
        for (c, v) in [Column::Dt, Column::Dp, Column::Lt, Column::Um, Column::Ma, Column::At].into_iter().zip(cats) {
            r.set_category(c, v.map(|s| s.trim().to_owned()).filter(|s| !s.is_empty()));
        }
        r.pre = pre;
        r
    }
}

fn dataset() -> impl Strategy<Value = Dataset> {
    (1usize..30).prop_flat_map(|n| (0..n).map(record).collect::<Vec<_>>()).prop_map(|rows| Dataset::new(rows).unwrap())
}

proptest! {
    #[test]
    fn model_round_trip(m in model()) {
        let text = model_to_string(&m).unwrap();
        let back = load_model(text.as_bytes()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn dataset_round_trip(d in dataset()) {
        let text = projects_to_string(&d).unwrap();
        let back = load_projects(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(projects_to_string(&back).unwrap(), text);
    }
}
