//! Numerical statistics used by driver selection and model fitting.

mod dummy;
mod hypothesis;
mod ols;
mod special;

pub use dummy::{default_reference, dummy_encode, DummyColumns};
pub use hypothesis::{correlation, mean, one_way_anova, pearson, sample_variance, TestResult};
pub use ols::{ols, DesignMatrix, OlsFit, INTERCEPT, RANK_TOLERANCE};
pub use special::{f_pvalue, ln_gamma, reg_inc_beta, t_pvalue};
