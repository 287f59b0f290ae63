//! Student-t machinery and the paired-test formulas that drive the reactive
//! comparison.

mod paired;
mod special;
mod student_t;

pub use paired::{
    beta_approx, p_value, paired_stats, required_sample_size, ErrorRequirements, PairedSample,
    PairedStats, Tail, MAX_SAMPLE_SIZE, SD_FLOOR,
};
pub use special::{beta_reg, ln_beta, ln_gamma};
pub use student_t::{t_cdf, t_pdf, t_quantile};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("insufficient sample: need at least 2 paired values, got {n}")]
    InsufficientSample { n: usize },
    #[error("zero effect size has no finite required sample size")]
    DegenerateEffect,
}
