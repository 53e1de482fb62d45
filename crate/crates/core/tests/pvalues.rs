//! p-values against statrs as an independent reference.

use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use riskest::statcore::{f_pvalue, t_pvalue};

#[test]
fn t_grid() {
    for df in [1usize, 2, 3, 5, 10, 30, 100] {
        let dist = StudentsT::new(0.0, 1.0, df as f64).unwrap();
        for i in 0..=80 {
            let t = i as f64 / 10.0;
            let want = 2.0 * dist.sf(t);
            let got = t_pvalue(t, df).unwrap();
            assert!((got - want).abs() < 1e-6, "t={t} df={df}: {got} vs {want}");
            assert_eq!(t_pvalue(-t, df).unwrap(), got);
        }
    }
}

#[test]
fn f_grid() {
    for (df1, df2) in [(1usize, 4usize), (2, 10), (3, 7), (5, 50), (7, 190), (20, 3)] {
        let dist = FisherSnedecor::new(df1 as f64, df2 as f64).unwrap();
        for i in 0..=60 {
            let f = i as f64 / 6.0;
            let want = dist.sf(f);
            let got = f_pvalue(f, df1, df2).unwrap();
            assert!((got - want).abs() < 1e-6, "F={f} df=({df1},{df2}): {got} vs {want}");
        }
    }
}

proptest! {
    #[test]
    fn f_tail_matches_reference(f in 0.0f64..50.0, df1 in 1usize..40, df2 in 1usize..200) {
        let want = FisherSnedecor::new(df1 as f64, df2 as f64).unwrap().sf(f);
        let got = f_pvalue(f, df1, df2).unwrap();
        prop_assert!((got - want).abs() < 1e-6, "{} vs {}", got, want);
    }

    #[test]
    fn tails_non_increasing(a in 0.0f64..20.0, b in 0.0f64..20.0, df in 1usize..60) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(t_pvalue(hi, df).unwrap() <= t_pvalue(lo, df).unwrap());
        prop_assert!(f_pvalue(hi, 2, df).unwrap() <= f_pvalue(lo, 2, df).unwrap());
    }
}
