use serde::{Deserialize, Serialize};

use super::{train_forest, ForestConfig, Matrix};
use crate::error::{Error, Result};
use crate::eval::auc;
use crate::preprocess::stratified_kfold;
use crate::seed::derive_seed;

/// Candidate tree counts `min, min+step, …, max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeGrid {
    pub min: usize,
    pub max: usize,
    pub step: usize,
}

impl Default for TreeGrid {
    fn default() -> Self {
        Self {
            min: 500,
            max: 1000,
            step: 100,
        }
    }
}

impl TreeGrid {
    pub fn candidates(&self) -> Result<Vec<usize>> {
        if self.min == 0 || self.min > self.max || self.step == 0 {
            return Err(Error::Config(format!(
                "tree grid {}..={} step {} is empty",
                self.min, self.max, self.step
            )));
        }
        Ok((self.min..=self.max).step_by(self.step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneRow {
    pub n_trees: usize,
    pub mean_auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub best_n_trees: usize,
    pub table: Vec<TuneRow>,
}

/// Picks the tree count with the best mean inner-CV AUC; ties go to the
/// smaller count. One forest of the largest size is grown per inner fold
/// and every candidate is scored on its leading trees.
pub fn tune_num_trees(
    x: &Matrix,
    y: &[bool],
    grid: TreeGrid,
    inner_folds: usize,
    base: &ForestConfig,
    seed: u64,
) -> Result<TuneResult> {
    let candidates = grid.candidates()?;
    let largest = *candidates.last().expect("grid is non-empty");
    let folds = stratified_kfold(y, inner_folds, derive_seed(seed, 0))?;
    let mut sums = vec![0.0; candidates.len()];
    for f in 0..inner_folds {
        let train = folds.train_indices(f);
        let test = folds.test_indices(f);
        let xt = x.select_rows(&train);
        let yt: Vec<bool> = train.iter().map(|&i| y[i]).collect();
        let config = ForestConfig {
            n_trees: largest,
            seed: derive_seed(seed, 1 + f as u64),
            ..base.clone()
        };
        let forest = train_forest(&xt, &yt, &config)?;
        let votes = forest.cumulative_votes(&x.select_rows(&test))?;
        let yv: Vec<bool> = test.iter().map(|&i| y[i]).collect();
        for (c, &n) in candidates.iter().enumerate() {
            let scores: Vec<f64> = votes.iter().map(|v| v[n - 1] / n as f64).collect();
            sums[c] += auc(&scores, &yv)?;
        }
    }
    let table: Vec<TuneRow> = candidates
        .iter()
        .zip(&sums)
        .map(|(&n, s)| TuneRow {
            n_trees: n,
            mean_auc: s / inner_folds as f64,
        })
        .collect();
    let mut best = table[0];
    for row in &table[1..] {
        if row.mean_auc > best.mean_auc {
            best = *row;
        }
    }
    Ok(TuneResult {
        best_n_trees: best.n_trees,
        table,
    })
}
