use serde::{Deserialize, Serialize};

use crate::dataset::{Cohort, StrokeType};
use crate::error::{Error, Result};
use crate::stats::quantile_sorted;

/// Fill values learned from a training cohort: median for continuous and
/// ordinal features, mode (0 on a tie) for indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Imputer {
    /// Per codebook feature; `None` for features not recorded in any
    /// stroke group present in the training data.
    pub fills: Vec<Option<f64>>,
}

impl Imputer {
    pub fn fit(train: &Cohort) -> Result<Self> {
        Self::fit_where(train, |_| true)
    }

    /// Fits only the named features; every other fill is `None`.
    pub fn fit_subset(train: &Cohort, features: &[String]) -> Result<Self> {
        for f in features {
            train.codebook().require(f)?;
        }
        Self::fit_where(train, |name| features.iter().any(|f| f == name))
    }

    fn fit_where(train: &Cohort, wanted: impl Fn(&str) -> bool) -> Result<Self> {
        let codebook = train.codebook();
        let present: Vec<StrokeType> = [StrokeType::Is, StrokeType::Ich]
            .into_iter()
            .filter(|&t| train.records().iter().any(|r| r.stroke_type == t))
            .collect();
        let mut fills = Vec::with_capacity(codebook.len());
        for (j, e) in codebook.entries().iter().enumerate() {
            if !wanted(&e.name) || !present.iter().any(|&t| e.groups.contains(t)) {
                fills.push(None);
                continue;
            }
            let mut v: Vec<f64> = train.records().iter().filter_map(|r| r.values[j]).collect();
            if v.is_empty() {
                return Err(Error::InsufficientData(format!(
                    "{} is missing for every training record",
                    e.name
                )));
            }
            let fill = if e.kind.is_indicator() {
                let ones = v.iter().filter(|&&x| x == 1.0).count();
                if 2 * ones > v.len() { 1.0 } else { 0.0 }
            } else {
                v.sort_by(f64::total_cmp);
                quantile_sorted(&v, 0.5)
            };
            fills.push(Some(fill));
        }
        Ok(Self { fills })
    }

    pub fn apply(&self, cohort: &Cohort) -> Cohort {
        let records = cohort
            .records()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                for (v, fill) in r.values.iter_mut().zip(&self.fills) {
                    if v.is_none() {
                        *v = *fill;
                    }
                }
                r
            })
            .collect();
        cohort.with_records(records)
    }
}

/// Fills missing cells of `apply_to` with values learned on `train` only.
pub fn impute_missing(train: &Cohort, apply_to: &Cohort) -> Result<Cohort> {
    Ok(Imputer::fit(train)?.apply(apply_to))
}
