use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// 0/1 indicator columns for every non-reference level of a categorical
/// variable. Levels are in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct DummyColumns {
    pub reference: String,
    pub levels: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

/// Most frequent level; ties go to the lexicographically smallest label.
pub fn default_reference<S: AsRef<str>>(values: &[S]) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v.as_ref()).or_default() += 1;
    }
    // BTreeMap iterates in label order, so `max_by_key` would keep the last
    // of equal counts; reverse to keep the first.
    counts
        .into_iter()
        .rev()
        .max_by_key(|(_, count)| *count)
        .map(|(label, _)| label.to_owned())
}

pub fn dummy_encode<S: AsRef<str>>(values: &[S], reference: &str) -> Result<DummyColumns> {
    let observed: BTreeSet<&str> = values.iter().map(AsRef::as_ref).collect();
    if !observed.contains(reference) {
        return Err(Error::invalid(
            "reference level",
            format!("{reference:?} does not occur in the data"),
        ));
    }
    let levels: Vec<String> = observed
        .into_iter()
        .filter(|l| *l != reference)
        .map(str::to_owned)
        .collect();
    let columns = levels
        .iter()
        .map(|level| {
            values
                .iter()
                .map(|v| if v.as_ref() == level { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(DummyColumns {
        reference: reference.to_owned(),
        levels,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_levels() {
        let d = dummy_encode(&["a", "b", "a"], "a").unwrap();
        assert_eq!(d.levels, vec!["b"]);
        assert_eq!(d.columns, vec![vec![0.0, 1.0, 0.0]]);
    }

    #[test]
    fn three_levels_rows_sum_at_most_one() {
        let values = ["a", "b", "c"];
        let d = dummy_encode(&values, "a").unwrap();
        assert_eq!(d.columns.len(), 2);
        for row in 0..values.len() {
            let s: f64 = d.columns.iter().map(|c| c[row]).sum();
            assert!(s <= 1.0);
            assert_eq!(s == 0.0, values[row] == "a");
        }
    }

    #[test]
    fn single_level_and_missing_reference() {
        assert!(dummy_encode(&["a", "a"], "a").unwrap().columns.is_empty());
        assert!(dummy_encode(&["a", "a"], "z").is_err());
    }

    #[test]
    fn reference_choice() {
        assert_eq!(default_reference(&["b", "a", "b"]).as_deref(), Some("b"));
        assert_eq!(default_reference(&["c", "b", "c", "b", "a"]).as_deref(), Some("b"));
        assert_eq!(default_reference::<&str>(&[]), None);
    }
}
