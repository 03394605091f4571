use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plan::{ExperimentPlan, SelectionScope, TreePolicy};
use crate::dataset::{Cohort, Endpoint, ExclusionCounts, Group, Groups, MorbidityPopulation};
use crate::error::{Error, Result};
use crate::eval::{accuracy, auc_ci, AucResult, ConfusionMatrix};
use crate::forest::{
    train_forest, tune_num_trees, FeatureImportance, Forest, ImportanceReport, Matrix, TuneRow,
};
use crate::preprocess::{
    binary_target, build_resample_plan, design_matrix, score_features_ttest, select_top_k, Imputer,
    Repetition,
};
use crate::seed::derive_seed;

/// Metrics and importances of one (repetition, fold) model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub repetition: usize,
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub auc: AucResult,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub n_trees: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuning: Option<Vec<TuneRow>>,
    pub selected: Vec<String>,
    /// Over `selected`, in selection order.
    pub importance: Vec<FeatureImportance>,
}

/// Test-fold scores of one repetition; every kept record appears once.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutOfFold {
    /// Indices into the problem population.
    pub records: Vec<usize>,
    pub scores: Vec<f64>,
    pub labels: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub group: Group,
    pub endpoint: Endpoint,
    pub morbidity_population: MorbidityPopulation,
    pub problem_seed: u64,
    pub n_records: usize,
    pub n_positive: usize,
    pub n_negative: usize,
    pub exclusions: ExclusionCounts,
    pub candidates: Vec<String>,
    /// Ordered by (repetition, fold).
    pub runs: Vec<FoldResult>,
    /// Scores of the first repetition.
    pub out_of_fold: OutOfFold,
}

/// Patients of one problem after exclusions, group filtering and endpoint
/// population, with their labels and scoreable features.
#[derive(Debug, Clone)]
pub struct ProblemData {
    pub cohort: Cohort,
    pub labels: Vec<bool>,
    pub exclusions: ExclusionCounts,
    pub candidates: Vec<String>,
}

impl ProblemData {
    pub fn n_positive(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }
}

/// Features available to a group: those recorded for every stroke type the
/// group contains.
fn recorded_for(group: Group, groups: Groups) -> bool {
    match group {
        Group::All => groups == Groups::BOTH,
        g => g.admits(groups),
    }
}

pub fn prepare_problem(cohort: &Cohort, plan: &ExperimentPlan) -> Result<ProblemData> {
    let (kept, exclusions) = cohort.apply_exclusions();
    let in_group = kept.filter_group(plan.group);
    let (population, labels) = binary_target(&in_group, plan.endpoint, plan.morbidity_population);
    if population.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no {} patients for {}",
            plan.group.as_str(),
            plan.endpoint.as_str()
        )));
    }
    let codebook = population.codebook();
    let named: Vec<String> = match &plan.candidates {
        Some(list) => {
            for name in list {
                codebook.require(name)?;
            }
            list.clone()
        }
        None => codebook
            .entries()
            .iter()
            .filter(|e| recorded_for(plan.group, e.groups))
            .map(|e| e.name.clone())
            .collect(),
    };
    let mut candidates = Vec::with_capacity(named.len());
    for name in named {
        if population.column(&name)?.iter().any(Option::is_some) {
            candidates.push(name);
        }
    }
    if candidates.is_empty() {
        return Err(Error::InsufficientData("no candidate feature has any recorded value".into()));
    }
    Ok(ProblemData {
        cohort: population,
        labels,
        exclusions,
        candidates,
    })
}

struct Prepared<'a> {
    data: &'a ProblemData,
    plan: &'a ExperimentPlan,
}

struct FoldOutput {
    result: FoldResult,
    test_records: Vec<usize>,
    scores: Vec<f64>,
}

fn subset_labels(labels: &[bool], rows: &[usize]) -> Vec<bool> {
    rows.iter().map(|&i| labels[i]).collect()
}

impl Prepared<'_> {
    fn select_features(&self, train: &Cohort, labels: &[bool]) -> Result<Vec<String>> {
        let scores = score_features_ttest(train, labels, &self.data.candidates, self.plan.ttest)?;
        Ok(select_top_k(&scores, self.plan.k_features)?.selected)
    }

    /// Features chosen on the whole undersampled set of a repetition.
    fn global_selection(&self, rep: &Repetition) -> Result<Vec<String>> {
        let kept = self.data.cohort.select(&rep.kept);
        let kept = Imputer::fit_subset(&kept, &self.data.candidates)?.apply(&kept);
        self.select_features(&kept, &subset_labels(&self.data.labels, &rep.kept))
    }

    fn n_trees(&self, x: &Matrix, y: &[bool], seed: u64) -> Result<(usize, Option<Vec<TuneRow>>)> {
        match self.plan.trees {
            TreePolicy::Fixed { n_trees } => Ok((n_trees, None)),
            TreePolicy::Tune { grid, inner_folds } => {
                let base = self.plan.tree_params.config(1, 0);
                let r = tune_num_trees(x, y, grid, inner_folds, &base, seed)?;
                Ok((r.best_n_trees, Some(r.table)))
            }
        }
    }

    fn run_fold(&self, r: usize, rep: &Repetition, fold: usize, global: Option<&[String]>) -> Result<FoldOutput> {
        let to_records = |pos: Vec<usize>| -> Vec<usize> { pos.into_iter().map(|p| rep.kept[p]).collect() };
        let train_rows = to_records(rep.folds.train_indices(fold));
        let test_rows = to_records(rep.folds.test_indices(fold));
        let y_train = subset_labels(&self.data.labels, &train_rows);
        let y_test = subset_labels(&self.data.labels, &test_rows);

        let train = self.data.cohort.select(&train_rows);
        let imputer = Imputer::fit_subset(&train, &self.data.candidates)?;
        let train = imputer.apply(&train);
        let selected = match global {
            Some(s) => s.to_vec(),
            None => self.select_features(&train, &y_train)?,
        };
        let x_train = design_matrix(&train, &selected)?;

        let models = derive_seed(rep.seeds.models, fold as u64);
        let (n_trees, tuning) = self.n_trees(&x_train, &y_train, derive_seed(models, 1))?;
        let forest = train_forest(&x_train, &y_train, &self.plan.tree_params.config(n_trees, derive_seed(models, 0)))?;

        let test = imputer.apply(&self.data.cohort.select(&test_rows));
        let scores = forest.predict_matrix(&design_matrix(&test, &selected)?)?;
        let auc = auc_ci(&scores, &y_test)?;
        let (acc, confusion) = accuracy(&scores, &y_test, self.plan.threshold)?;
        let importance = ImportanceReport::compute(&forest, &x_train, &y_train, derive_seed(models, 2))?.features;

        Ok(FoldOutput {
            result: FoldResult {
                repetition: r,
                fold,
                n_train: train_rows.len(),
                n_test: test_rows.len(),
                auc,
                accuracy: acc,
                confusion,
                n_trees,
                tuning,
                selected,
                importance,
            },
            test_records: test_rows,
            scores,
        })
    }
}

/// Repeated undersampled cross-validation of one problem. Folds run in
/// parallel; results are merged in (repetition, fold) order.
pub fn run_problem(cohort: &Cohort, plan: &ExperimentPlan) -> Result<RunResult> {
    plan.validate()?;
    if !plan.tree_params.config(1, 0).bootstrap {
        return Err(Error::Config("permutation importance needs bootstrap sampling".into()));
    }
    let data = prepare_problem(cohort, plan)?;
    run_prepared(&data, plan)
}

pub fn run_prepared(data: &ProblemData, plan: &ExperimentPlan) -> Result<RunResult> {
    let problem_seed = plan.problem_seed();
    let resample = build_resample_plan(problem_seed, plan.repetitions, plan.folds)?;
    let ctx = Prepared { data, plan };

    let mut repetitions = Vec::with_capacity(plan.repetitions);
    for r in 0..plan.repetitions {
        let rep = resample.realize(r, &data.labels, plan.stratify).map_err(|e| e.in_fold(r, 0))?;
        let global = match plan.selection_scope {
            SelectionScope::PerFold => None,
            SelectionScope::Global => Some(ctx.global_selection(&rep).map_err(|e| e.in_fold(r, 0))?),
        };
        repetitions.push((rep, global));
    }

    let jobs: Vec<(usize, usize)> = (0..plan.repetitions)
        .flat_map(|r| (0..plan.folds).map(move |f| (r, f)))
        .collect();
    let outputs = jobs
        .par_iter()
        .map(|&(r, f)| {
            let (rep, global) = &repetitions[r];
            ctx.run_fold(r, rep, f, global.as_deref()).map_err(|e| e.in_fold(r, f))
        })
        .collect::<Result<Vec<FoldOutput>>>()?;

    let mut oof: BTreeMap<usize, (f64, bool)> = BTreeMap::new();
    for out in outputs.iter().filter(|o| o.result.repetition == 0) {
        for (&i, &s) in out.test_records.iter().zip(&out.scores) {
            oof.insert(i, (s, data.labels[i]));
        }
    }
    let out_of_fold = OutOfFold {
        records: oof.keys().copied().collect(),
        scores: oof.values().map(|v| v.0).collect(),
        labels: oof.values().map(|v| v.1).collect(),
    };

    let n_positive = data.n_positive();
    Ok(RunResult {
        group: plan.group,
        endpoint: plan.endpoint,
        morbidity_population: plan.morbidity_population,
        problem_seed,
        n_records: data.labels.len(),
        n_positive,
        n_negative: data.labels.len() - n_positive,
        exclusions: data.exclusions,
        candidates: data.candidates.clone(),
        runs: outputs.into_iter().map(|o| o.result).collect(),
        out_of_fold,
    })
}

pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// A forest fitted on the first repetition's undersampled set, kept for
/// decision-surface plots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalModel {
    pub schema_version: u32,
    pub group: Group,
    pub endpoint: Endpoint,
    pub morbidity_population: MorbidityPopulation,
    /// Size of the problem population the model was fitted from.
    pub n_population: usize,
    /// Indices into that population.
    pub training_records: Vec<usize>,
    /// Imputation values for the model's features.
    pub fills: BTreeMap<String, f64>,
    pub forest: Forest,
}

impl FinalModel {
    /// Fills the model's features with its stored training values.
    pub fn impute(&self, cohort: &Cohort) -> Result<Cohort> {
        let mut fills = vec![None; cohort.codebook().len()];
        for (name, v) in &self.fills {
            fills[cohort.codebook().require(name)?] = Some(*v);
        }
        Ok(Imputer { fills }.apply(cohort))
    }
}

pub fn fit_final_model(cohort: &Cohort, plan: &ExperimentPlan) -> Result<FinalModel> {
    plan.validate()?;
    let data = prepare_problem(cohort, plan)?;
    fit_final_prepared(&data, plan)
}

pub fn fit_final_prepared(data: &ProblemData, plan: &ExperimentPlan) -> Result<FinalModel> {
    let resample = build_resample_plan(plan.problem_seed(), 1, plan.folds)?;
    let rep = resample.realize(0, &data.labels, plan.stratify)?;
    let ctx = Prepared { data, plan };
    let kept = data.cohort.select(&rep.kept);
    let imputer = Imputer::fit_subset(&kept, &data.candidates)?;
    let kept = imputer.apply(&kept);
    let y = subset_labels(&data.labels, &rep.kept);
    let selected = ctx.select_features(&kept, &y)?;
    let x = design_matrix(&kept, &selected)?;
    // one index past the last fold, so no cross-validation model shares it
    let models = derive_seed(rep.seeds.models, plan.folds as u64);
    let (n_trees, _) = ctx.n_trees(&x, &y, derive_seed(models, 1))?;
    let forest = train_forest(&x, &y, &plan.tree_params.config(n_trees, derive_seed(models, 0)))?;
    let codebook = data.cohort.codebook();
    let fills = selected
        .iter()
        .map(|f| {
            let fill = imputer.fills[codebook.require(f)?].expect("selected features are fitted");
            Ok((f.clone(), fill))
        })
        .collect::<Result<_>>()?;
    Ok(FinalModel {
        schema_version: MODEL_SCHEMA_VERSION,
        group: plan.group,
        endpoint: plan.endpoint,
        morbidity_population: plan.morbidity_population,
        n_population: data.labels.len(),
        training_records: rep.kept,
        fills,
        forest,
    })
}
