//! CART classification trees with Gini impurity, bagged into a random
//! forest, with impurity (MDI) and permutation (MDA) importance and
//! tree-count tuning.

mod importance;
mod matrix;
mod split;
mod tree;
mod tune;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from};

pub use importance::{gini_importance, permutation_importance, FeatureImportance, ImportanceReport};
pub use matrix::Matrix;
pub use split::{best_split, gini_impurity, Split};
pub use tree::{train_tree, TreeNode};
pub use tune::{tune_num_trees, TreeGrid, TuneResult, TuneRow};

pub const FOREST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features tried per split; `None` means ⌊√p⌋.
    #[serde(default)]
    pub mtry: Option<usize>,
    pub min_leaf: usize,
    #[serde(default)]
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub bootstrap_fraction: f64,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 500,
            mtry: None,
            min_leaf: 1,
            max_depth: None,
            bootstrap: true,
            bootstrap_fraction: 1.0,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Config("n_trees must be at least 1".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::Config("min_leaf must be at least 1".into()));
        }
        if self.mtry == Some(0) {
            return Err(Error::Config("mtry must be at least 1".into()));
        }
        if !(self.bootstrap_fraction > 0.0 && self.bootstrap_fraction <= 1.0) {
            return Err(Error::Config("bootstrap_fraction must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn resolve_mtry(&self, n_features: usize) -> Result<usize> {
        self.validate()?;
        let m = self
            .mtry
            .unwrap_or_else(|| ((n_features as f64).sqrt().floor() as usize).max(1));
        if m > n_features {
            return Err(Error::Config(format!(
                "mtry {m} exceeds the feature count {n_features}"
            )));
        }
        Ok(m)
    }
}

/// Trained ensemble. Serializes to a versioned JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub schema_version: u32,
    pub config: ForestConfig,
    pub feature_names: Vec<String>,
    pub n_train: usize,
    pub trees: Vec<TreeNode>,
    /// Per tree, the training rows outside its bootstrap sample.
    pub oob: Vec<Vec<usize>>,
}

/// Trains `config.n_trees` trees; tree `t` draws from the stream seeded by
/// `derive_seed(config.seed, t)`, so the result does not depend on how the
/// work is scheduled.
pub fn train_forest(x: &Matrix, y: &[bool], config: &ForestConfig) -> Result<Forest> {
    config.resolve_mtry(x.n_features())?;
    let rows: Vec<usize> = (0..x.n_rows()).collect();
    let grown: Vec<(TreeNode, Vec<usize>)> = (0..config.n_trees)
        .into_par_iter()
        .map(|t| train_tree(x, y, &rows, config, &mut rng_from(derive_seed(config.seed, t as u64))))
        .collect::<Result<_>>()?;
    let (trees, oob) = grown.into_iter().unzip();
    Ok(Forest {
        schema_version: FOREST_SCHEMA_VERSION,
        config: config.clone(),
        feature_names: x.names().to_vec(),
        n_train: x.n_rows(),
        trees,
        oob,
    })
}

impl Forest {
    /// Fraction of trees voting positive for a row given in the forest's
    /// feature order.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let votes: f64 = self.trees.iter().map(|t| t.vote(|j| row[j])).sum();
        votes / self.trees.len() as f64
    }

    /// Like [`Forest::predict_proba`], looking features up by name.
    pub fn predict_proba_named(&self, lookup: impl Fn(&str) -> Option<f64>) -> Result<f64> {
        let row = self
            .feature_names
            .iter()
            .map(|n| lookup(n).ok_or_else(|| Error::UnknownFeature(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.predict_proba(&row))
    }

    /// Column of `x` holding each trained feature.
    pub fn column_map(&self, x: &Matrix) -> Result<Vec<usize>> {
        self.feature_names
            .iter()
            .map(|n| x.index_of(n).ok_or_else(|| Error::UnknownFeature(n.clone())))
            .collect()
    }

    pub fn predict_matrix(&self, x: &Matrix) -> Result<Vec<f64>> {
        let map = self.column_map(x)?;
        Ok((0..x.n_rows())
            .map(|i| {
                let votes: f64 = self.trees.iter().map(|t| t.vote(|j| x.value(i, map[j]))).sum();
                votes / self.trees.len() as f64
            })
            .collect())
    }

    /// Per row, the running vote total after each tree: entry `[i][t]` sums
    /// the votes of trees `0..=t`.
    pub fn cumulative_votes(&self, x: &Matrix) -> Result<Vec<Vec<f64>>> {
        let map = self.column_map(x)?;
        Ok((0..x.n_rows())
            .map(|i| {
                let mut acc = 0.0;
                self.trees
                    .iter()
                    .map(|t| {
                        acc += t.vote(|j| x.value(i, map[j]));
                        acc
                    })
                    .collect()
            })
            .collect())
    }

    /// The forest made of the first `n` trees; identical to training with
    /// `n_trees = n` and the same seed.
    pub fn truncated(&self, n: usize) -> Forest {
        let n = n.min(self.trees.len());
        let mut config = self.config.clone();
        config.n_trees = n;
        Forest {
            schema_version: self.schema_version,
            config,
            feature_names: self.feature_names.clone(),
            n_train: self.n_train,
            trees: self.trees[..n].to_vec(),
            oob: self.oob[..n].to_vec(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Forest> {
        let forest: Forest = serde_json::from_str(text)?;
        if forest.schema_version != FOREST_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "forest schema version {} is not supported (expected {FOREST_SCHEMA_VERSION})",
                forest.schema_version
            )));
        }
        if forest.trees.len() != forest.config.n_trees || forest.oob.len() != forest.trees.len() {
            return Err(Error::Config("forest document is inconsistent".into()));
        }
        Ok(forest)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Forest> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Forest::from_json(&text)
    }
}

#[cfg(test)]
mod tests;
