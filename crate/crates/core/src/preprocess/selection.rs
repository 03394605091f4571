use serde::{Deserialize, Serialize};

use crate::dataset::Cohort;
use crate::error::{Error, Result};
use crate::stats::{t_test, TTestKind};

pub const DEFAULT_K: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "value")]
pub enum CutoffRule {
    TopK(usize),
    PThreshold(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature: String,
    pub t: f64,
    pub abs_t: f64,
    pub p_value: f64,
    /// False when a class had fewer than two values or the statistic was
    /// undefined; such features score zero.
    pub scored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Scores in candidate order.
    pub scores: Vec<FeatureScore>,
    /// Features by decreasing `abs_t`; ties keep candidate order.
    pub ranking: Vec<String>,
    pub selected: Vec<String>,
    pub cutoff_rule: Option<CutoffRule>,
}

/// Two-sample t statistic of each candidate feature between the classes,
/// on non-missing values. Binary features use their 0/1 encoding.
pub fn score_features_ttest(
    cohort: &Cohort,
    labels: &[bool],
    candidates: &[String],
    kind: TTestKind,
) -> Result<SelectionReport> {
    if labels.len() != cohort.len() {
        return Err(Error::LengthMismatch {
            left: cohort.len(),
            right: labels.len(),
        });
    }
    let mut scores = Vec::with_capacity(candidates.len());
    for name in candidates {
        let column = cohort.column(name)?;
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (v, &l) in column.iter().zip(labels) {
            if let Some(v) = v {
                if l {
                    pos.push(*v);
                } else {
                    neg.push(*v);
                }
            }
        }
        let score = match t_test(&pos, &neg, kind) {
            Ok(r) => FeatureScore {
                feature: name.clone(),
                t: r.t,
                abs_t: r.abs_t,
                p_value: r.p_two_sided,
                scored: true,
            },
            Err(_) => FeatureScore {
                feature: name.clone(),
                t: 0.0,
                abs_t: 0.0,
                p_value: 1.0,
                scored: false,
            },
        };
        scores.push(score);
    }
    if !scores.is_empty() && scores.iter().all(|s| !s.scored) {
        return Err(Error::InsufficientData(
            "no feature has two non-missing values in each class".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].abs_t.total_cmp(&scores[a].abs_t));
    let ranking = order.iter().map(|&i| scores[i].feature.clone()).collect();
    Ok(SelectionReport {
        scores,
        ranking,
        selected: Vec::new(),
        cutoff_rule: None,
    })
}

/// Keeps the first `k` ranked features (all of them when `k` exceeds the
/// ranking).
pub fn select_top_k(report: &SelectionReport, k: usize) -> Result<SelectionReport> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let mut out = report.clone();
    out.selected = report.ranking.iter().take(k).cloned().collect();
    out.cutoff_rule = Some(CutoffRule::TopK(k));
    Ok(out)
}

/// Keeps ranked features with `p < alpha`.
pub fn select_p_threshold(report: &SelectionReport, alpha: f64) -> Result<SelectionReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Config(format!("alpha {alpha} must lie in (0, 1]")));
    }
    let mut out = report.clone();
    out.selected = report
        .ranking
        .iter()
        .filter(|f| {
            report
                .scores
                .iter()
                .find(|s| &s.feature == *f)
                .is_some_and(|s| s.scored && s.p_value < alpha)
        })
        .cloned()
        .collect();
    out.cutoff_rule = Some(CutoffRule::PThreshold(alpha));
    Ok(out)
}
