use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{paired_t, shapiro_wilk, wilcoxon_signed_rank, NormalityResult, WilcoxonMethod};

pub const DEFAULT_ALPHA: f64 = 0.05;
/// Largest sample the Shapiro-Wilk approximation covers.
pub const SHAPIRO_MAX_N: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityCheck {
    pub name: String,
    pub n: usize,
    /// `None` when the test could not be run; see `note`.
    pub shapiro_wilk: Option<NormalityResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl NormalityCheck {
    fn run(name: &str, x: &[f64], alpha: f64) -> Self {
        let (shapiro_wilk, note) = if x.len() > SHAPIRO_MAX_N {
            (None, Some(format!("skipped: more than {SHAPIRO_MAX_N} values")))
        } else {
            match shapiro_wilk(x) {
                Ok(mut r) => {
                    r.reject_at_005 = r.p_value < alpha;
                    (Some(r), None)
                }
                Err(e) => (None, Some(format!("skipped: {e}"))),
            }
        };
        Self {
            name: name.to_string(),
            n: x.len(),
            shapiro_wilk,
            note,
        }
    }

    pub fn rejects(&self) -> bool {
        self.shapiro_wilk.is_some_and(|r| r.reject_at_005)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairedTest {
    Wilcoxon,
    PairedT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub a: String,
    pub b: String,
    pub n_pairs: usize,
    pub test: PairedTest,
    /// Wilcoxon V (positive rank sum of `a − b`) or the paired t.
    pub statistic: f64,
    pub p_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilcoxon_method: Option<WilcoxonMethod>,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub normality: Vec<NormalityCheck>,
    pub pooled: NormalityCheck,
    pub any_normality_rejected: bool,
    pub test: PairedTest,
    pub pairs: Vec<PairComparison>,
}

pub fn compare_groups(vectors: &[(String, Vec<f64>)]) -> Result<ComparisonReport> {
    compare_groups_at(vectors, DEFAULT_ALPHA)
}

/// Shapiro-Wilk on every vector and on their concatenation; if any of them
/// rejects normality each pair gets a paired Wilcoxon test, otherwise a
/// paired t-test.
pub fn compare_groups_at(vectors: &[(String, Vec<f64>)], alpha: f64) -> Result<ComparisonReport> {
    if vectors.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "comparison needs at least 2 vectors (got {})",
            vectors.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("alpha {alpha} must lie in (0, 1)")));
    }
    let normality: Vec<NormalityCheck> = vectors
        .iter()
        .map(|(name, x)| NormalityCheck::run(name, x, alpha))
        .collect();
    let pooled_values: Vec<f64> = vectors.iter().flat_map(|(_, x)| x.iter().copied()).collect();
    let pooled = NormalityCheck::run("pooled", &pooled_values, alpha);
    let any_normality_rejected = pooled.rejects() || normality.iter().any(NormalityCheck::rejects);
    let test = if any_normality_rejected {
        PairedTest::Wilcoxon
    } else {
        PairedTest::PairedT
    };

    let mut pairs = Vec::new();
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let (a, x) = &vectors[i];
            let (b, y) = &vectors[j];
            if x.len() != y.len() {
                return Err(Error::LengthMismatch {
                    left: x.len(),
                    right: y.len(),
                });
            }
            let (statistic, p_value, wilcoxon_method) = match test {
                PairedTest::Wilcoxon => {
                    let r = wilcoxon_signed_rank(x, y)?;
                    (r.w_plus, r.p_two_sided, Some(r.method))
                }
                PairedTest::PairedT => {
                    let r = paired_t(x, y)?;
                    (r.t, r.p_two_sided, None)
                }
            };
            pairs.push(PairComparison {
                a: a.clone(),
                b: b.clone(),
                n_pairs: x.len(),
                test,
                statistic,
                p_value,
                wilcoxon_method,
                reject: p_value < alpha,
            });
        }
    }
    Ok(ComparisonReport {
        alpha,
        normality,
        pooled,
        any_normality_rejected,
        test,
        pairs,
    })
}
