use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Forest, Matrix, TreeNode};
use crate::error::{Error, Result};
use crate::seed::{derive_path, rng_from};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    pub feature: String,
    /// Mean decrease in impurity; nonnegative.
    pub gini: f64,
    /// Mean decrease in OOB accuracy under permutation; may be negative.
    pub permutation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub features: Vec<FeatureImportance>,
}

impl ImportanceReport {
    pub fn compute(forest: &Forest, x: &Matrix, y: &[bool], seed: u64) -> Result<Self> {
        let gini = gini_importance(forest);
        let perm = permutation_importance(forest, x, y, seed)?;
        Ok(Self {
            features: forest
                .feature_names
                .iter()
                .zip(gini.into_iter().zip(perm))
                .map(|(f, (g, p))| FeatureImportance {
                    feature: f.clone(),
                    gini: g,
                    permutation: p,
                })
                .collect(),
        })
    }
}

fn tree_mdi(tree: &TreeNode, out: &mut [f64]) {
    let root = tree.n_node() as f64;
    tree.for_each_split(&mut |f, n, d| out[f] += n as f64 / root * d);
}

/// Per feature, the node-weighted impurity decrease summed within each
/// tree and averaged over trees.
pub fn gini_importance(forest: &Forest) -> Vec<f64> {
    let mut total = vec![0.0; forest.feature_names.len()];
    for tree in &forest.trees {
        tree_mdi(tree, &mut total);
    }
    let n = forest.trees.len() as f64;
    total.iter().map(|v| v / n).collect()
}

/// Per feature, the mean over trees of OOB accuracy minus OOB accuracy
/// after permuting that feature among the tree's OOB rows. `x` must be the
/// training matrix. Trees with an empty OOB set are skipped.
pub fn permutation_importance(forest: &Forest, x: &Matrix, y: &[bool], seed: u64) -> Result<Vec<f64>> {
    if x.n_rows() != forest.n_train || y.len() != forest.n_train {
        return Err(Error::LengthMismatch {
            left: forest.n_train,
            right: x.n_rows().min(y.len()),
        });
    }
    let map = forest.column_map(x)?;
    let p = forest.feature_names.len();
    let mut sums = vec![0.0; p];
    let mut used_trees = 0usize;
    let correct = |vote: f64, label: bool| ((vote >= 0.5) == label) as u32;
    let mut row = vec![0.0; p];
    for (t, (tree, oob)) in forest.trees.iter().zip(&forest.oob).enumerate() {
        if oob.is_empty() {
            continue;
        }
        used_trees += 1;
        let base: u32 = oob
            .iter()
            .map(|&i| correct(tree.vote(|j| x.value(i, map[j])), y[i]))
            .sum();
        for (j, sum) in sums.iter_mut().enumerate() {
            if !tree.uses_feature(j) {
                continue;
            }
            let mut perm = oob.clone();
            perm.shuffle(&mut rng_from(derive_path(seed, &[t as u64, j as u64])));
            let mut hits = 0u32;
            for (&i, &donor) in oob.iter().zip(&perm) {
                for (k, v) in row.iter_mut().enumerate() {
                    *v = x.value(i, map[k]);
                }
                row[j] = x.value(donor, map[j]);
                hits += correct(tree.vote(|k| row[k]), y[i]);
            }
            *sum += (base as f64 - hits as f64) / oob.len() as f64;
        }
    }
    if used_trees == 0 {
        return Err(Error::InsufficientData(
            "no tree has out-of-bag rows".into(),
        ));
    }
    Ok(sums.iter().map(|s| s / used_trees as f64).collect())
}
