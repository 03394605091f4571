use serde::{Deserialize, Serialize};

use super::run::RunResult;
use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::stats::{mean, quantile_sorted, sample_sd};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub median: f64,
    /// Sample SD; 0 for a single value.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl MetricSummary {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData("no values to summarise".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            mean: mean(values),
            median: quantile_sorted(&sorted, 0.5),
            sd: sample_sd(values),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
        })
    }
}

/// Importances of one feature summed over every model that used it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceSum {
    pub feature: String,
    pub gini_sum: f64,
    pub permutation_sum: f64,
    /// Number of models whose selection included the feature.
    pub times_selected: usize,
    /// 1-based rank by `gini_sum`.
    pub gini_rank: usize,
    pub permutation_rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCount {
    pub n_trees: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub n_runs: usize,
    pub auc: MetricSummary,
    pub accuracy: MetricSummary,
    /// Ordered by decreasing `gini_sum`; ties keep candidate order.
    pub importance: Vec<ImportanceSum>,
    pub tree_counts: Vec<TreeCount>,
    /// Summed over every test fold.
    pub confusion: ConfusionMatrix,
    pub auc_values: Vec<f64>,
    pub accuracy_values: Vec<f64>,
}

impl AggregateReport {
    /// Feature names ordered by summed Gini importance.
    pub fn gini_ranking(&self) -> Vec<&str> {
        self.importance.iter().map(|i| i.feature.as_str()).collect()
    }
}

fn ranks(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut rank = vec![0; values.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    rank
}

pub fn aggregate(result: &RunResult) -> Result<AggregateReport> {
    if result.runs.is_empty() {
        return Err(Error::InsufficientData("run result has no entries".into()));
    }
    let auc_values: Vec<f64> = result.runs.iter().map(|r| r.auc.auc).collect();
    let accuracy_values: Vec<f64> = result.runs.iter().map(|r| r.accuracy).collect();

    // candidate order first, then anything selected from outside the list
    let mut names: Vec<String> = result.candidates.clone();
    for run in &result.runs {
        for imp in &run.importance {
            if !names.contains(&imp.feature) {
                names.push(imp.feature.clone());
            }
        }
    }
    let mut gini = vec![0.0; names.len()];
    let mut perm = vec![0.0; names.len()];
    let mut times = vec![0usize; names.len()];
    for run in &result.runs {
        for imp in &run.importance {
            let j = names.iter().position(|n| *n == imp.feature).expect("name collected above");
            gini[j] += imp.gini;
            perm[j] += imp.permutation;
            times[j] += 1;
        }
    }
    let used: Vec<usize> = (0..names.len()).filter(|&j| times[j] > 0).collect();
    let g: Vec<f64> = used.iter().map(|&j| gini[j]).collect();
    let p: Vec<f64> = used.iter().map(|&j| perm[j]).collect();
    let (g_rank, p_rank) = (ranks(&g), ranks(&p));
    let mut importance: Vec<ImportanceSum> = used
        .iter()
        .enumerate()
        .map(|(k, &j)| ImportanceSum {
            feature: names[j].clone(),
            gini_sum: gini[j],
            permutation_sum: perm[j],
            times_selected: times[j],
            gini_rank: g_rank[k],
            permutation_rank: p_rank[k],
        })
        .collect();
    importance.sort_by_key(|i| i.gini_rank);

    let mut tree_counts: Vec<TreeCount> = Vec::new();
    let mut confusion = ConfusionMatrix::default();
    for run in &result.runs {
        match tree_counts.iter_mut().find(|t| t.n_trees == run.n_trees) {
            Some(t) => t.runs += 1,
            None => tree_counts.push(TreeCount {
                n_trees: run.n_trees,
                runs: 1,
            }),
        }
        confusion.tp += run.confusion.tp;
        confusion.fp += run.confusion.fp;
        confusion.tn += run.confusion.tn;
        confusion.fn_ += run.confusion.fn_;
    }
    tree_counts.sort_by_key(|t| t.n_trees);

    Ok(AggregateReport {
        n_runs: result.runs.len(),
        auc: MetricSummary::of(&auc_values)?,
        accuracy: MetricSummary::of(&accuracy_values)?,
        importance,
        tree_counts,
        confusion,
        auc_values,
        accuracy_values,
    })
}
