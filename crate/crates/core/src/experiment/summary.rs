use serde::{Deserialize, Serialize};

use crate::dataset::{Cohort, ExclusionCounts, FeatureKind, Group};
use crate::error::Result;
use crate::stats::{describe, ks_normality, NormalityResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub count: usize,
    pub percent: f64,
}

impl Proportion {
    fn of(count: usize, total: usize) -> Self {
        Self {
            count,
            percent: if total == 0 { 0.0 } else { 100.0 * count as f64 / total as f64 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSummary {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// Lilliefors-corrected Kolmogorov-Smirnov test against a normal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_normality: Option<NormalityResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub feature: String,
    pub kind: FeatureKind,
    pub n_present: usize,
    pub n_missing: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericSummary>,
    /// Share of ones among present values, for indicators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<Proportion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: Group,
    pub n: usize,
    pub mortality: Proportion,
    pub morbidity: Proportion,
    pub poor_outcome: Proportion,
    pub features: Vec<FeatureSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSummary {
    pub n_input: usize,
    pub exclusions: ExclusionCounts,
    pub groups: Vec<GroupSummary>,
}

fn summarize_feature(cohort: &Cohort, name: &str, kind: FeatureKind) -> Result<FeatureSummary> {
    let column = cohort.column(name)?;
    let present: Vec<f64> = column.iter().flatten().copied().collect();
    let (numeric, positive) = if present.is_empty() {
        (None, None)
    } else if kind.is_indicator() {
        let ones = present.iter().filter(|&&v| v == 1.0).count();
        (None, Some(Proportion::of(ones, present.len())))
    } else {
        let d = describe(&present)?;
        let numeric = NumericSummary {
            mean: d.mean,
            sd: d.sd,
            median: d.median,
            q1: d.q1,
            q3: d.q3,
            ks_normality: ks_normality(&present).ok(),
        };
        (Some(numeric), None)
    };
    Ok(FeatureSummary {
        feature: name.to_string(),
        kind,
        n_present: present.len(),
        n_missing: column.len() - present.len(),
        numeric,
        positive,
    })
}

/// Descriptive tables per group after exclusions: outcome rates plus
/// mean, SD, median and quartiles (or percentages for indicators) of every
/// feature recorded for the group.
pub fn summarize_cohort(cohort: &Cohort) -> Result<CohortSummary> {
    let (kept, exclusions) = cohort.apply_exclusions();
    let mut groups = Vec::new();
    for group in Group::EVERY {
        let g = kept.filter_group(group);
        let n = g.len();
        let count = |f: fn(&crate::dataset::OutcomeLabel) -> bool| g.labels().iter().filter(|l| f(l)).count();
        let features = g
            .codebook()
            .entries()
            .iter()
            .filter(|e| group.admits(e.groups))
            .map(|e| summarize_feature(&g, &e.name, e.kind))
            .collect::<Result<_>>()?;
        groups.push(GroupSummary {
            group,
            n,
            mortality: Proportion::of(count(|l| l.mortality), n),
            morbidity: Proportion::of(count(|l| l.morbidity), n),
            poor_outcome: Proportion::of(count(|l| l.poor_outcome), n),
            features,
        });
    }
    Ok(CohortSummary {
        n_input: cohort.len(),
        exclusions,
        groups,
    })
}
