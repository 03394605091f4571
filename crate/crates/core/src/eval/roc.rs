use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::dataset::{Cohort, Endpoint, MorbidityPopulation};
use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::stats::special::qnorm;

/// Vote fraction at or above which a record is called positive.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Records scoring at or above this value are called positive. The
    /// leading point uses `+inf`.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub n_pos: usize,
    pub n_neg: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AucResult {
    pub auc: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }
}

fn check_inputs(scores: &[f64], labels: &[bool]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    if let Some(bad) = scores.iter().find(|s| s.is_nan()) {
        return Err(Error::Degenerate(format!("score {bad} is not comparable")));
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::InsufficientData(
            "ROC analysis needs both classes".into(),
        ));
    }
    Ok((n_pos, n_neg))
}

/// ROC curve with one point per distinct score; tied scores move both
/// rates at once.
pub fn roc_curve(scores: &[f64], labels: &[bool]) -> Result<RocCurve> {
    let (n_pos, n_neg) = check_inputs(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = Vec::with_capacity(scores.len() + 1);
    points.push(RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    });
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
            threshold: s,
        });
    }
    Ok(RocCurve {
        points,
        n_pos,
        n_neg,
    })
}

/// Trapezoidal area under `curve`.
pub fn auc_trapezoid(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) * 0.5)
        .sum()
}

pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    Ok(auc_trapezoid(&roc_curve(scores, labels)?))
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half, by direct pair counting. Quadratic; meant as a
/// reference.
pub fn mann_whitney_auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let (n_pos, n_neg) = check_inputs(scores, labels)?;
    let mut credit = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if !labels[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] {
                continue;
            }
            credit += match si.partial_cmp(&sj) {
                Some(Ordering::Greater) => 1.0,
                Some(Ordering::Equal) => 0.5,
                _ => 0.0,
            };
        }
    }
    Ok(credit / (n_pos as f64 * n_neg as f64))
}

/// 1-based midranks of `x`.
fn midranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

fn sample_variance(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

/// AUC with a DeLong standard error and a 95 % normal interval clipped to
/// [0, 1].
pub fn auc_ci(scores: &[f64], labels: &[bool]) -> Result<AucResult> {
    let (n_pos, n_neg) = check_inputs(scores, labels)?;
    if n_pos < 2 || n_neg < 2 {
        return Err(Error::InsufficientData(
            "DeLong variance needs at least two records per class".into(),
        ));
    }
    let pos: Vec<f64> = scores.iter().zip(labels).filter(|(_, &l)| l).map(|(s, _)| *s).collect();
    let neg: Vec<f64> = scores.iter().zip(labels).filter(|(_, &l)| !l).map(|(s, _)| *s).collect();
    let all: Vec<f64> = pos.iter().chain(&neg).copied().collect();
    let r_all = midranks(&all);
    let r_pos = midranks(&pos);
    let r_neg = midranks(&neg);
    let (m, n) = (n_pos as f64, n_neg as f64);
    let v10: Vec<f64> = (0..n_pos).map(|i| (r_all[i] - r_pos[i]) / n).collect();
    let v01: Vec<f64> = (0..n_neg)
        .map(|j| 1.0 - (r_all[n_pos + j] - r_neg[j]) / m)
        .collect();
    let auc = v10.iter().sum::<f64>() / m;
    let se = (sample_variance(&v10) / m + sample_variance(&v01) / n).max(0.0).sqrt();
    let z = qnorm(0.975);
    Ok(AucResult {
        auc,
        se,
        ci_low: (auc - z * se).clamp(0.0, 1.0),
        ci_high: (auc + z * se).clamp(0.0, 1.0),
    })
}

/// Accuracy of calling `score >= threshold` positive.
pub fn accuracy(scores: &[f64], labels: &[bool], threshold: f64) -> Result<(f64, ConfusionMatrix)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    if scores.is_empty() {
        return Err(Error::InsufficientData("accuracy of an empty set".into()));
    }
    let mut cm = ConfusionMatrix {
        tp: 0,
        fp: 0,
        tn: 0,
        fn_: 0,
    };
    for (&s, &l) in scores.iter().zip(labels) {
        match (s >= threshold, l) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, false) => cm.tn += 1,
            (false, true) => cm.fn_ += 1,
        }
    }
    Ok((cm.accuracy(), cm))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleVariableRoc {
    pub feature: String,
    #[serde(flatten)]
    pub auc: AucResult,
    /// Lower values predict the positive class; the reported AUC is for
    /// the negated feature.
    pub inverted: bool,
    pub n_pos: usize,
    pub n_neg: usize,
}

/// Discrimination of one raw feature for an endpoint, oriented so that the
/// AUC is at least 0.5.
pub fn single_variable_roc(
    cohort: &Cohort,
    feature: &str,
    endpoint: Endpoint,
    population: MorbidityPopulation,
) -> Result<SingleVariableRoc> {
    let column = cohort.column(feature)?;
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    for (v, outcome) in column.iter().zip(cohort.labels()) {
        if let (Some(v), Some(l)) = (v, endpoint.label(outcome, population)) {
            scores.push(*v);
            labels.push(l);
        }
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos < 2 || n_neg < 2 {
        return Err(Error::InsufficientData(format!(
            "{feature}: need two non-missing values per class, have {n_pos}/{n_neg}"
        )));
    }
    if scores.iter().all(|&s| s == scores[0]) {
        return Err(Error::Degenerate(format!(
            "{feature} is constant; no discrimination possible"
        )));
    }
    let mut result = auc_ci(&scores, &labels)?;
    let inverted = result.auc < 0.5;
    if inverted {
        let negated: Vec<f64> = scores.iter().map(|s| -s).collect();
        result = auc_ci(&negated, &labels)?;
    }
    Ok(SingleVariableRoc {
        feature: feature.to_string(),
        auc: result,
        inverted,
        n_pos,
        n_neg,
    })
}

/// Writes `fpr,tpr,threshold` rows.
pub fn write_roc_csv<W: std::io::Write>(curve: &RocCurve, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["fpr", "tpr", "threshold"])?;
    for p in &curve.points {
        w.write_record([fmt17(p.fpr), fmt17(p.tpr), fmt17(p.threshold)])?;
    }
    w.flush().map_err(|e| Error::io("<roc csv>", e))?;
    Ok(())
}
