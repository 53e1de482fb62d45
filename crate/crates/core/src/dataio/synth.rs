//! Seeded generator of project databases with a known (planted) effort law.
//!
//! Each record draws functional size from a log-normal, team size uniformly
//! from `1..=mts_max`, every categorical driver from weighted levels, and PRE
//! from a full 27-risk assessment whose levels share a latent risk
//! propensity. Effort is then
//!
//! ```text
//! effort = intercept + b_fs·fs + b_mts·mts + Σ offset(level) + b_pre·pre + N(0, noise_sd²)
//! ```
//!
//! floored at `effort_floor`.

use std::collections::{BTreeMap, BTreeSet};

use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Binomial, Distribution, LogNormal, StandardNormal};

use super::record::{Column, Dataset, ProjectRecord};
use crate::error::{Error, Result};
use crate::riskmodel::{builtin_taxonomy, project_risk_exposure, ImpactVector, Level, RiskAssessment, RiskRating};

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpec {
    pub label: String,
    /// Relative sampling frequency.
    pub weight: f64,
    /// Additive effect on effort.
    pub offset: f64,
}

impl LevelSpec {
    pub fn new(label: &str, weight: f64, offset: f64) -> Self {
        LevelSpec {
            label: label.to_owned(),
            weight,
            offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategorySpec {
    pub column: Column,
    pub levels: Vec<LevelSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub seed: u64,
    pub intercept: f64,
    pub b_fs: f64,
    pub b_mts: f64,
    pub b_pre: f64,
    pub noise_sd: f64,
    /// Parameters of ln(fs).
    pub fs_log_mean: f64,
    pub fs_log_sd: f64,
    pub mts_max: u32,
    /// Beta shape parameters of the latent risk propensity.
    pub risk_alpha: f64,
    pub risk_beta: f64,
    pub categories: Vec<CategorySpec>,
    /// Chance that any one driver cell (PRE included) is left empty.
    pub missing_rate: f64,
    pub effort_floor: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        let cat = |column, levels: &[(&str, f64, f64)]| CategorySpec {
            column,
            levels: levels.iter().map(|(l, w, o)| LevelSpec::new(l, *w, *o)).collect(),
        };
        GeneratorConfig {
            n: 200,
            seed: 42,
            intercept: 10.0,
            b_fs: 0.08,
            b_mts: 3.8,
            b_pre: 5.5,
            noise_sd: 37.0,
            fs_log_mean: 250f64.ln(),
            fs_log_sd: 0.5,
            mts_max: 12,
            risk_alpha: 2.0,
            risk_beta: 3.0,
            categories: vec![
                cat(Column::Dt, &[("New", 0.5, 0.0), ("Enhancement", 0.4, 0.0), ("Redevelopment", 0.1, 0.0)]),
                cat(Column::Dp, &[("PC", 0.4, 0.0), ("MF", 0.3, 0.0), ("MR", 0.2, 0.0), ("Multi", 0.1, 0.0)]),
                cat(Column::Lt, &[("3GL", 0.5, 0.0), ("4GL", 0.3, 20.0), ("ApG", 0.2, 40.0)]),
                cat(Column::Um, &[("Yes", 0.6, 0.0), ("No", 0.4, 0.0)]),
                cat(Column::Ma, &[("Developed", 0.6, 0.0), ("Purchased", 0.25, 15.0), ("Combined", 0.15, 25.0)]),
                cat(
                    Column::At,
                    &[("MIS", 0.4, 0.0), ("Transaction", 0.3, 0.0), ("RealTime", 0.2, 0.0), ("Scientific", 0.1, 0.0)],
                ),
            ],
            missing_rate: 0.0,
            effort_floor: 1.0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |what: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(what, format!("{v} must be positive")))
            }
        };
        if self.n < 10 {
            return Err(Error::invalid("n", format!("{} records; need at least 10", self.n)));
        }
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return Err(Error::invalid("noise_sd", format!("{} must be non-negative", self.noise_sd)));
        }
        for (what, v) in [("intercept", self.intercept), ("b_fs", self.b_fs), ("b_mts", self.b_mts), ("b_pre", self.b_pre)] {
            if !v.is_finite() {
                return Err(Error::invalid(what, format!("{v} is not finite")));
            }
        }
        if !self.fs_log_mean.is_finite() {
            return Err(Error::invalid("fs_log_mean", "not finite"));
        }
        positive("fs_log_sd", self.fs_log_sd)?;
        positive("risk_alpha", self.risk_alpha)?;
        positive("risk_beta", self.risk_beta)?;
        positive("effort_floor", self.effort_floor)?;
        if self.mts_max < 2 {
            return Err(Error::invalid("mts_max", "team size needs at least two values"));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(Error::invalid("missing_rate", format!("{} is outside [0, 1)", self.missing_rate)));
        }
        let mut columns = BTreeSet::new();
        for cat in &self.categories {
            let c = cat.column;
            if c.is_numeric() {
                return Err(Error::invalid("categories", format!("{c} is not categorical")));
            }
            if !columns.insert(c) {
                return Err(Error::invalid("categories", format!("{c} configured twice")));
            }
            let mut labels = BTreeSet::new();
            for l in &cat.levels {
                if l.label.is_empty() || l.label.contains([',', '"', '\n', '\r', '\t']) || l.label.trim() != l.label {
                    return Err(Error::invalid("level", format!("{c}: unusable label {:?}", l.label)));
                }
                if !labels.insert(l.label.as_str()) {
                    return Err(Error::invalid("level", format!("{c}: label {:?} repeated", l.label)));
                }
                if !(l.weight.is_finite() && l.weight >= 0.0) || !l.offset.is_finite() {
                    return Err(Error::invalid("level", format!("{c}/{}: bad weight or offset", l.label)));
                }
            }
            let active: Vec<&LevelSpec> = cat.levels.iter().filter(|l| l.weight > 0.0).collect();
            if active.is_empty() {
                return Err(Error::invalid("categories", format!("{c} has no level with positive weight")));
            }
            if active.len() == 1 && active[0].offset != 0.0 {
                return Err(Error::invalid(
                    "categories",
                    format!("{c} always takes {:?}, so its offset cannot be told apart from the intercept", active[0].label),
                ));
            }
        }
        Ok(())
    }
}

/// The effort law a synthetic dataset was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedLaw {
    pub intercept: f64,
    pub fs: f64,
    pub mts: f64,
    pub pre: f64,
    pub offsets: BTreeMap<Column, Vec<(String, f64)>>,
    pub noise_sd: f64,
}

impl PlantedLaw {
    pub fn offset(&self, column: Column, level: &str) -> Option<f64> {
        self.offsets
            .get(&column)?
            .iter()
            .find(|(l, _)| l == level)
            .map(|(_, o)| *o)
    }

    /// Intercept and named coefficients a noiseless fit should find when each
    /// nominal driver in `references` is dummy-coded against that level.
    /// Columns not listed must have no planted offsets.
    pub fn expected_coefficients(&self, references: &BTreeMap<Column, String>) -> Result<(f64, BTreeMap<String, f64>)> {
        let mut intercept = self.intercept;
        let mut coefs = BTreeMap::from([
            ("fs".to_owned(), self.fs),
            ("mts".to_owned(), self.mts),
            ("pre".to_owned(), self.pre),
        ]);
        for (column, reference) in references {
            let base = self
                .offset(*column, reference)
                .ok_or_else(|| Error::invalid("reference", format!("{column} has no level {reference:?}")))?;
            intercept += base;
            for (level, offset) in &self.offsets[column] {
                if level != reference {
                    coefs.insert(format!("{column}={level}"), offset - base);
                }
            }
        }
        Ok((intercept, coefs))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub dataset: Dataset,
    pub planted: PlantedLaw,
}

fn sample_assessment(rng: &mut ChaCha8Rng, propensity: &Binomial, project: &str) -> Result<RiskAssessment> {
    let level = |rng: &mut ChaCha8Rng| Level::new(1 + propensity.sample(rng) as u8);
    let mut assessment = RiskAssessment::new(project);
    for item in builtin_taxonomy().items() {
        let probability = level(rng)?;
        let impact = ImpactVector {
            technical: level(rng)?,
            cost: level(rng)?,
            schedule: level(rng)?,
            team: level(rng)?,
        };
        assessment.add(RiskRating::new(item.id, probability, impact)?)?;
    }
    Ok(assessment)
}

pub fn generate_synthetic(config: &GeneratorConfig) -> Result<SyntheticDataset> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let fs_dist = LogNormal::new(config.fs_log_mean, config.fs_log_sd)
        .map_err(|e| Error::invalid("fs distribution", e.to_string()))?;
    let risk_dist =
        Beta::new(config.risk_alpha, config.risk_beta).map_err(|e| Error::invalid("risk distribution", e.to_string()))?;
    let pickers = config
        .categories
        .iter()
        .map(|c| {
            WeightedIndex::new(c.levels.iter().map(|l| l.weight))
                .map_err(|e| Error::invalid("level weights", format!("{}: {e}", c.column)))
        })
        .collect::<Result<Vec<_>>>()?;
    let width = config.n.to_string().len();

    let mut records = Vec::with_capacity(config.n);
    for i in 0..config.n {
        let id = format!("S{:0width$}", i + 1);
        let fs = fs_dist.sample(&mut rng);
        let mts = rng.random_range(1..=config.mts_max) as f64;
        let mut record = ProjectRecord::new(id.clone(), 1.0);
        let mut offsets = 0.0;
        for (cat, picker) in config.categories.iter().zip(&pickers) {
            let level = &cat.levels[picker.sample(&mut rng)];
            offsets += level.offset;
            record.set_category(cat.column, Some(level.label.clone()));
        }
        let u: f64 = risk_dist.sample(&mut rng);
        let propensity = Binomial::new(4, u).map_err(|e| Error::invalid("risk propensity", e.to_string()))?;
        let assessment = sample_assessment(&mut rng, &propensity, &id)?;
        let pre = project_risk_exposure(&assessment)?.pre;
        let z: f64 = StandardNormal.sample(&mut rng);

        let law = config.intercept + config.b_fs * fs + config.b_mts * mts + offsets + config.b_pre * pre;
        record.effort = (law + config.noise_sd * z).max(config.effort_floor);
        record.fs = Some(fs);
        record.mts = Some(mts);
        record.pre = Some(pre);

        if config.missing_rate > 0.0 {
            for column in Column::ALL {
                if rng.random::<f64>() < config.missing_rate && record.has(column) {
                    if column.is_numeric() {
                        record.set_numeric(column, None);
                    } else {
                        record.set_category(column, None);
                    }
                }
            }
        }
        records.push(record);
    }

    let planted = PlantedLaw {
        intercept: config.intercept,
        fs: config.b_fs,
        mts: config.b_mts,
        pre: config.b_pre,
        offsets: config
            .categories
            .iter()
            .map(|c| (c.column, c.levels.iter().map(|l| (l.label.clone(), l.offset)).collect()))
            .collect(),
        noise_sd: config.noise_sd,
    };
    Ok(SyntheticDataset {
        dataset: Dataset::new(records)?,
        planted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statcore::correlation;

    #[test]
    fn deterministic_and_valid() {
        let config = GeneratorConfig::default();
        let a = generate_synthetic(&config).unwrap();
        assert_eq!(a, generate_synthetic(&config).unwrap());
        assert_eq!(a.dataset.len(), 200);
        for r in a.dataset.records() {
            assert!(r.effort >= 1.0);
            let pre = r.pre.unwrap();
            assert!((1.0..=25.0).contains(&pre));
        }
        let other = generate_synthetic(&GeneratorConfig { seed: 7, ..config }).unwrap();
        assert_ne!(a.dataset, other.dataset);
    }

    #[test]
    fn pre_effort_correlation_calibrated() {
        let s = generate_synthetic(&GeneratorConfig::default()).unwrap();
        let pre: Vec<f64> = s.dataset.records().iter().map(|r| r.pre.unwrap()).collect();
        let r = correlation(&pre, &s.dataset.efforts()).unwrap();
        assert!((r - 0.4).abs() <= 0.1, "r = {r}");
    }

    #[test]
    fn degenerate_configs_rejected() {
        let mut c = GeneratorConfig::default();
        c.categories[2].levels = vec![LevelSpec::new("3GL", 1.0, 0.0), LevelSpec::new("4GL", 0.0, 20.0)];
        assert!(generate_synthetic(&c).is_ok());
        c.categories[2].levels = vec![LevelSpec::new("3GL", 1.0, 5.0)];
        assert!(generate_synthetic(&c).is_err());
        assert!(generate_synthetic(&GeneratorConfig { n: 9, ..Default::default() }).is_err());
        assert!(generate_synthetic(&GeneratorConfig { noise_sd: -1.0, ..Default::default() }).is_err());
    }

    #[test]
    fn missing_cells() {
        let c = GeneratorConfig {
            missing_rate: 0.2,
            ..Default::default()
        };
        let s = generate_synthetic(&c).unwrap();
        let missing = s.dataset.records().iter().filter(|r| r.lt.is_none()).count();
        assert!(missing > 10 && missing < 80, "{missing}");
    }

    #[test]
    fn expected_coefficients_shift_intercept() {
        let s = generate_synthetic(&GeneratorConfig::default()).unwrap();
        let refs = BTreeMap::from([(Column::Lt, "4GL".to_owned())]);
        let (b0, coefs) = s.planted.expected_coefficients(&refs).unwrap();
        assert_eq!(b0, 30.0);
        assert_eq!(coefs["lt=3GL"], -20.0);
        assert_eq!(coefs["lt=ApG"], 20.0);
    }
}
