use serde::{Deserialize, Serialize};

use crate::dataset::{Endpoint, Group, MorbidityPopulation};
use crate::error::{Error, Result};
use crate::eval::DEFAULT_THRESHOLD;
use crate::forest::{ForestConfig, TreeGrid};
use crate::preprocess::DEFAULT_K;
use crate::seed::derive_path;
use crate::stats::TTestKind;

/// How many trees each fold's forest gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum TreePolicy {
    Fixed { n_trees: usize },
    /// Inner stratified CV over the grid on each fold's training set.
    Tune { grid: TreeGrid, inner_folds: usize },
}

impl Default for TreePolicy {
    fn default() -> Self {
        TreePolicy::Tune {
            grid: TreeGrid::default(),
            inner_folds: 5,
        }
    }
}

/// Where the t-test ranking is computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionScope {
    /// On each fold's training rows.
    #[default]
    PerFold,
    /// Once per repetition on the whole undersampled set, test folds
    /// included.
    Global,
}

/// Tree-growing knobs shared by every forest of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    pub mtry: Option<usize>,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        let d = ForestConfig::default();
        Self {
            mtry: d.mtry,
            min_leaf: d.min_leaf,
            max_depth: d.max_depth,
        }
    }
}

impl TreeParams {
    pub fn config(&self, n_trees: usize, seed: u64) -> ForestConfig {
        ForestConfig {
            n_trees,
            mtry: self.mtry,
            min_leaf: self.min_leaf,
            max_depth: self.max_depth,
            seed,
            ..ForestConfig::default()
        }
    }
}

/// One prediction problem and the protocol used to evaluate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentPlan {
    pub group: Group,
    pub endpoint: Endpoint,
    pub repetitions: usize,
    pub folds: usize,
    pub k_features: usize,
    pub trees: TreePolicy,
    pub tree_params: TreeParams,
    pub master_seed: u64,
    pub selection_scope: SelectionScope,
    pub morbidity_population: MorbidityPopulation,
    pub stratify: bool,
    pub ttest: TTestKind,
    pub threshold: f64,
    /// Restricts the scored features; `None` means every feature recorded
    /// for the whole group.
    pub candidates: Option<Vec<String>>,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            group: Group::All,
            endpoint: Endpoint::Mortality,
            repetitions: 100,
            folds: 10,
            k_features: DEFAULT_K,
            trees: TreePolicy::default(),
            tree_params: TreeParams::default(),
            master_seed: 0,
            selection_scope: SelectionScope::default(),
            morbidity_population: MorbidityPopulation::default(),
            stratify: true,
            ttest: TTestKind::Welch,
            threshold: DEFAULT_THRESHOLD,
            candidates: None,
        }
    }
}

impl ExperimentPlan {
    pub fn new(group: Group, endpoint: Endpoint, master_seed: u64) -> Self {
        Self {
            group,
            endpoint,
            master_seed,
            ..Self::default()
        }
    }

    pub fn for_problem(&self, group: Group, endpoint: Endpoint) -> Self {
        Self {
            group,
            endpoint,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(Error::Config(format!("{name} must be at least 1")))
            } else {
                Ok(())
            }
        };
        positive("repetitions", self.repetitions)?;
        positive("k_features", self.k_features)?;
        if self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        match self.trees {
            TreePolicy::Fixed { n_trees } => positive("n_trees", n_trees)?,
            TreePolicy::Tune { grid, inner_folds } => {
                grid.candidates()?;
                if inner_folds < 2 {
                    return Err(Error::Config("inner_folds must be at least 2".into()));
                }
            }
        }
        positive("min_leaf", self.tree_params.min_leaf)?;
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::Config(format!("threshold {} must lie in (0, 1)", self.threshold)));
        }
        Ok(())
    }

    /// Seed owned by this (group, endpoint) problem. Problems never share a
    /// stream, so one problem's results do not move when another changes.
    pub fn problem_seed(&self) -> u64 {
        let g = Group::EVERY.iter().position(|&g| g == self.group).unwrap() as u64;
        let e = Endpoint::EVERY.iter().position(|&e| e == self.endpoint).unwrap() as u64;
        derive_path(self.master_seed, &[g, e])
    }
}
