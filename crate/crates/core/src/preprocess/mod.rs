//! Feature scoring and selection, undersampling, stratified folds,
//! imputation and the repetition plan.

mod impute;
mod resample;
mod selection;

use crate::dataset::{Cohort, Endpoint, MorbidityPopulation};
use crate::error::{Error, Result};
use crate::forest::Matrix;

pub use impute::{impute_missing, Imputer};
pub use resample::{
    build_resample_plan, kfold, stratified_kfold, undersample, FoldAssignment, Repetition,
    RepetitionSeeds, ResamplePlan,
};
pub use selection::{
    score_features_ttest, select_p_threshold, select_top_k, CutoffRule, FeatureScore,
    SelectionReport, DEFAULT_K,
};

/// Keeps the patients inside the endpoint's population and returns them
/// with their binary labels.
pub fn binary_target(
    cohort: &Cohort,
    endpoint: Endpoint,
    population: MorbidityPopulation,
) -> (Cohort, Vec<bool>) {
    let mut keep = Vec::new();
    let mut labels = Vec::new();
    for (i, outcome) in cohort.labels().iter().enumerate() {
        if let Some(l) = endpoint.label(outcome, population) {
            keep.push(i);
            labels.push(l);
        }
    }
    (cohort.select(&keep), labels)
}

/// Dense matrix of the named features. Every cell must be present.
pub fn design_matrix(cohort: &Cohort, features: &[String]) -> Result<Matrix> {
    let mut columns = Vec::with_capacity(features.len());
    for name in features {
        let column = cohort.column(name)?;
        let dense = column
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::InsufficientData(format!("{name} is missing for record {i}; impute first"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        columns.push(dense);
    }
    Matrix::from_columns(features.to_vec(), columns)
}
