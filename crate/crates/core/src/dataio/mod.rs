//! Project databases, risk-assessment files, model files and the synthetic
//! database generator.

mod assessment;
mod modelfile;
mod projects;
mod record;
mod synth;

pub use assessment::{
    apply_assessments, load_assessment, load_assessment_dir, write_assessment, ASSESSMENT_HEADER,
    PRE_AGREEMENT_TOLERANCE,
};
pub use modelfile::{load_model, model_to_string, save_model, MODEL_FORMAT};
pub use projects::{load_projects, projects_to_string, write_projects, HEADER};
pub use record::{Column, Dataset, ProjectRecord};
pub use synth::{generate_synthetic, CategorySpec, GeneratorConfig, LevelSpec, PlantedLaw, SyntheticDataset};
