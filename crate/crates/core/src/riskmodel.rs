//! Software risk checklist and risk exposure scoring.
//!
//! Risks are rated with the five-level DoD scale: one probability level and
//! four impact levels (technical performance, cost, schedule, team). Exposure
//! of a single risk is `probability × composite impact`, where the composite
//! impact is the mean of the four impact levels. The project risk exposure
//! (PRE) is the mean over dimensions of the mean exposure of the rated risks
//! in that dimension.
//!
//! Unrated risks are treated as not applicable. A dimension with no rated
//! risk is left out of the PRE average and reported in
//! [`ExposureBreakdown::unassessed`].

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiskDimension {
    pub id: &'static str,
    pub name: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiskItem {
    pub id: &'static str,
    pub dimension: &'static str,
    pub description: &'static str,
}

/// The fixed checklist of risk dimensions and items.
#[derive(Debug, PartialEq, Eq)]
pub struct RiskTaxonomy {
    dimensions: &'static [RiskDimension],
    items: &'static [RiskItem],
}

impl RiskTaxonomy {
    pub fn dimensions(&self) -> &'static [RiskDimension] {
        self.dimensions
    }

    pub fn items(&self) -> &'static [RiskItem] {
        self.items
    }

    pub fn item(&self, id: &str) -> Option<&'static RiskItem> {
        self.items.iter().find(|item| item.id == id)
    }

    pub fn items_in<'a>(&'a self, dimension: &'a str) -> impl Iterator<Item = &'static RiskItem> + 'a {
        self.items
            .iter()
            .filter(move |item| item.dimension == dimension)
    }
}

const DIMENSIONS: &[RiskDimension] = &[
    RiskDimension { id: "user", name: "User" },
    RiskDimension { id: "requirement", name: "Requirement" },
    RiskDimension { id: "complexity", name: "Project complexity" },
    RiskDimension { id: "planning", name: "Planning & control" },
    RiskDimension { id: "team", name: "Team" },
    RiskDimension { id: "org_env", name: "Organizational environment" },
];

macro_rules! item {
    ($id:literal, $dim:literal, $desc:literal) => {
        RiskItem { id: $id, dimension: $dim, description: $desc }
    };
}

const ITEMS: &[RiskItem] = &[
    item!("user.1", "user", "Users resist to change"),
    item!("user.2", "user", "Conflict between users"),
    item!("user.3", "user", "Users with negative attitudes toward the project"),
    item!("user.4", "user", "Users not committed to the project"),
    item!("user.5", "user", "Lack of cooperation from users"),
    item!("requirement.1", "requirement", "Continually changing system requirements"),
    item!("requirement.2", "requirement", "System requirements not adequately identified"),
    item!("requirement.3", "requirement", "Unclear system requirements"),
    item!("requirement.4", "requirement", "Incorrect system requirements"),
    item!("complexity.1", "complexity", "Project involved the use of new technology"),
    item!("complexity.2", "complexity", "High level of technical complexity"),
    item!("complexity.3", "complexity", "Immature technology"),
    item!(
        "complexity.4",
        "complexity",
        "Project involves use of technology that has not been used in prior projects"
    ),
    item!("planning.1", "planning", "Lack of effective project management methodology"),
    item!("planning.2", "planning", "Project progress not monitored closely enough"),
    item!("planning.3", "planning", "Inadequate estimation of required resources"),
    item!("planning.4", "planning", "Poor project planning"),
    item!("planning.5", "planning", "Project milestones not clearly defined"),
    item!("planning.6", "planning", "Inexperienced project manager"),
    item!("planning.7", "planning", "Ineffective communication"),
    item!("team.1", "team", "Inexperienced team members"),
    item!("team.2", "team", "Inadequately trained development team members"),
    item!("team.3", "team", "Team members lack specialized skills required by the project"),
    item!("org_env.1", "org_env", "Change in organizational management during the project"),
    item!("org_env.2", "org_env", "Corporate politics with negative effect on project"),
    item!("org_env.3", "org_env", "Unstable organizational environment"),
    item!("org_env.4", "org_env", "Organization undergoing restructuring during the project"),
];

static TAXONOMY: RiskTaxonomy = RiskTaxonomy {
    dimensions: DIMENSIONS,
    items: ITEMS,
};

pub fn builtin_taxonomy() -> &'static RiskTaxonomy {
    &TAXONOMY
}

/// One row of the DoD assessment scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleRow {
    pub level: u8,
    pub probability: &'static str,
    pub technical: &'static str,
    pub cost: &'static str,
    pub schedule: &'static str,
    pub team: &'static str,
}

/// Labels for levels 1 through 5. Only the level integers enter the
/// arithmetic; the approximate percentages are descriptive.
pub const DOD_SCALE: [ScaleRow; 5] = [
    ScaleRow {
        level: 1,
        probability: "Not likely (~10)",
        technical: "Minimal or no impact",
        cost: "Minimal or no impact",
        schedule: "Minimal or no impact",
        team: "None",
    },
    ScaleRow {
        level: 2,
        probability: "Unlikely (~30)",
        technical: "Acceptable with some reduction in margin",
        cost: "<5%",
        schedule: "Additional resources required. Able to meet need dates",
        team: "Some impact",
    },
    ScaleRow {
        level: 3,
        probability: "Likely (~50)",
        technical: "Acceptable with significant reduction in margin",
        cost: "5-7%",
        schedule: "Minor slip in key milestone. Not able to meet need dates",
        team: "Moderate impact",
    },
    ScaleRow {
        level: 4,
        probability: "Highly likely (~70)",
        technical: "Acceptable; no remaining margin",
        cost: "7-10%",
        schedule: "Major slip in key milestone or critical path impacted",
        team: "Major impact",
    },
    ScaleRow {
        level: 5,
        probability: "Near certainty (~90)",
        technical: "Unacceptable",
        cost: ">10%",
        schedule: "Cannot achieve key team or major program milestone",
        team: "Unacceptable",
    },
];

/// An assessment level on the 1..=5 DoD scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u8);

impl Level {
    pub const MIN: Level = Level(1);
    pub const MAX: Level = Level(5);

    pub fn new(value: u8) -> Result<Self> {
        if (1..=5).contains(&value) {
            Ok(Level(value))
        } else {
            Err(Error::invalid("level", format!("{value} is outside 1..=5")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0)
    }

    pub fn scale_row(self) -> &'static ScaleRow {
        &DOD_SCALE[usize::from(self.0 - 1)]
    }

    /// The next level up, or `None` at the top of the scale.
    pub fn raised(self) -> Option<Level> {
        (self.0 < 5).then(|| Level(self.0 + 1))
    }
}

impl TryFrom<i64> for Level {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        u8::try_from(value)
            .map_err(|_| Error::invalid("level", format!("{value} is outside 1..=5")))
            .and_then(Level::new)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImpactVector {
    pub technical: Level,
    pub cost: Level,
    pub schedule: Level,
    pub team: Level,
}

impl ImpactVector {
    pub fn new(technical: u8, cost: u8, schedule: u8, team: u8) -> Result<Self> {
        Ok(ImpactVector {
            technical: Level::new(technical)?,
            cost: Level::new(cost)?,
            schedule: Level::new(schedule)?,
            team: Level::new(team)?,
        })
    }

    pub fn uniform(level: Level) -> Self {
        ImpactVector {
            technical: level,
            cost: level,
            schedule: level,
            team: level,
        }
    }

    pub fn components(&self) -> [Level; 4] {
        [self.technical, self.cost, self.schedule, self.team]
    }
}

/// Mean of the four impact components, in [1, 5].
pub fn composite_impact(impact: &ImpactVector) -> f64 {
    impact.components().iter().map(|l| l.value()).sum::<f64>() / 4.0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiskRating {
    pub risk: String,
    pub probability: Level,
    pub impact: ImpactVector,
}

impl RiskRating {
    pub fn new(risk: impl Into<String>, probability: Level, impact: ImpactVector) -> Result<Self> {
        let risk = risk.into();
        if builtin_taxonomy().item(&risk).is_none() {
            return Err(Error::UnknownRisk(risk));
        }
        Ok(RiskRating {
            risk,
            probability,
            impact,
        })
    }
}

/// Exposure of one rated risk: probability × composite impact, in [1, 25].
pub fn risk_exposure(rating: &RiskRating) -> Result<f64> {
    if builtin_taxonomy().item(&rating.risk).is_none() {
        return Err(Error::UnknownRisk(rating.risk.clone()));
    }
    Ok(rating.probability.value() * composite_impact(&rating.impact))
}

/// Mean exposure of the ratings of a single dimension.
pub fn dimension_exposure(ratings: &[&RiskRating]) -> Result<f64> {
    if ratings.is_empty() {
        return Err(Error::DimensionUnassessed("no rated risks".into()));
    }
    let mut total = 0.0;
    for rating in ratings {
        total += risk_exposure(rating)?;
    }
    Ok(total / ratings.len() as f64)
}

/// Ratings for one project, at most one per risk.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RiskAssessment {
    pub project: String,
    ratings: Vec<RiskRating>,
}

impl RiskAssessment {
    pub fn new(project: impl Into<String>) -> Self {
        RiskAssessment {
            project: project.into(),
            ratings: Vec::new(),
        }
    }

    pub fn with_ratings(project: impl Into<String>, ratings: Vec<RiskRating>) -> Result<Self> {
        let mut assessment = RiskAssessment::new(project);
        for rating in ratings {
            assessment.add(rating)?;
        }
        Ok(assessment)
    }

    pub fn add(&mut self, rating: RiskRating) -> Result<()> {
        if builtin_taxonomy().item(&rating.risk).is_none() {
            return Err(Error::UnknownRisk(rating.risk));
        }
        if self.rating(&rating.risk).is_some() {
            return Err(Error::DuplicateRating(rating.risk));
        }
        self.ratings.push(rating);
        Ok(())
    }

    pub fn ratings(&self) -> &[RiskRating] {
        &self.ratings
    }

    pub fn rating(&self, risk: &str) -> Option<&RiskRating> {
        self.ratings.iter().find(|r| r.risk == risk)
    }

    pub fn rating_mut(&mut self, risk: &str) -> Option<&mut RiskRating> {
        self.ratings.iter_mut().find(|r| r.risk == risk)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionExposure {
    pub dimension: &'static RiskDimension,
    pub rated: usize,
    /// `None` when no risk of the dimension was rated.
    pub exposure: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExposureBreakdown {
    pub dimensions: Vec<DimensionExposure>,
    pub pre: f64,
    /// Ids of dimensions excluded from the average because nothing was rated.
    pub unassessed: Vec<&'static str>,
}

/// Per-dimension exposures and the project risk exposure.
pub fn project_risk_exposure(assessment: &RiskAssessment) -> Result<ExposureBreakdown> {
    if assessment.ratings.is_empty() {
        return Err(Error::NoRatings);
    }
    let taxonomy = builtin_taxonomy();
    let mut seen = BTreeSet::new();
    let mut dimensions = Vec::with_capacity(taxonomy.dimensions().len());
    let mut unassessed = Vec::new();
    for dimension in taxonomy.dimensions() {
        let rated: Vec<&RiskRating> = assessment
            .ratings
            .iter()
            .filter(|r| {
                taxonomy
                    .item(&r.risk)
                    .is_some_and(|item| item.dimension == dimension.id)
            })
            .collect();
        for r in &rated {
            if !seen.insert(r.risk.as_str()) {
                return Err(Error::DuplicateRating(r.risk.clone()));
            }
        }
        let exposure = if rated.is_empty() {
            unassessed.push(dimension.id);
            None
        } else {
            Some(dimension_exposure(&rated)?)
        };
        dimensions.push(DimensionExposure {
            dimension,
            rated: rated.len(),
            exposure,
        });
    }
    if let Some(unknown) = assessment
        .ratings
        .iter()
        .find(|r| !seen.contains(r.risk.as_str()))
    {
        return Err(Error::UnknownRisk(unknown.risk.clone()));
    }

    let assessed: Vec<f64> = dimensions.iter().filter_map(|d| d.exposure).collect();
    let pre = assessed.iter().sum::<f64>() / assessed.len() as f64;
    Ok(ExposureBreakdown {
        dimensions,
        pre,
        unassessed,
    })
}

/// Rates every risk in the checklist with the same probability and impact.
pub fn uniform_assessment(project: &str, probability: Level, impact: ImpactVector) -> RiskAssessment {
    RiskAssessment {
        project: project.to_owned(),
        ratings: builtin_taxonomy()
            .items()
            .iter()
            .map(|item| RiskRating {
                risk: item.id.to_owned(),
                probability,
                impact,
            })
            .collect(),
    }
}
