//! Numerical statistics used by feature filtering, cohort summaries and
//! model comparison.
//!
//! Only the normal and Student t distributions are provided, through
//! [`special`].

mod describe;
mod ks;
mod shapiro;
pub mod special;
mod ttest;
mod wilcoxon;

use serde::{Deserialize, Serialize};

pub use describe::{describe, mean, quantile_sorted, sample_sd, DescriptiveSummary};
pub use ks::ks_normality;
pub use shapiro::shapiro_wilk;
pub use ttest::{paired_t, student_t, t_test, welch_t, TTestKind, TTestResult};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonMethod, WilcoxonResult};

/// Outcome of a normality test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityResult {
    /// W for Shapiro-Wilk, D for Kolmogorov-Smirnov.
    pub statistic: f64,
    pub p_value: f64,
    pub reject_at_005: bool,
}

impl NormalityResult {
    fn new(statistic: f64, p_value: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self {
            statistic,
            p_value,
            reject_at_005: p_value < 0.05,
        }
    }
}

fn sorted_copy(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}
