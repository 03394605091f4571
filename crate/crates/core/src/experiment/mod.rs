//! The six prediction problems (three patient groups by two endpoints):
//! repeated undersampled cross-validation, aggregation, group comparison,
//! decision-surface grids, cohort summaries and the command line.

mod aggregate;
mod cli;
mod compare;
mod heatmap;
mod plan;
mod report;
mod run;
mod summary;

pub use aggregate::{aggregate, AggregateReport, ImportanceSum, MetricSummary, TreeCount};
pub use cli::cli_main;
pub use compare::{
    compare_groups, compare_groups_at, ComparisonReport, NormalityCheck, PairComparison, PairedTest,
    DEFAULT_ALPHA, SHAPIRO_MAX_N,
};
pub use heatmap::{annotate_misclassified, heatmap_grid, write_heatmap_csv, HeatmapGrid, MisclassifiedRecord};
pub use plan::{ExperimentPlan, SelectionScope, TreeParams, TreePolicy};
pub use report::{
    fmt17, problem_key, read_versioned, to_json_string, write_importance_csv, write_json,
    write_out_of_fold_roc, ProblemReport, RunReport, Versioned, SCHEMA_VERSION,
};
pub use run::{
    fit_final_model, fit_final_prepared, prepare_problem, run_prepared, run_problem, FinalModel,
    FoldResult, OutOfFold, ProblemData, RunResult, MODEL_SCHEMA_VERSION,
};
pub use summary::{summarize_cohort, CohortSummary, FeatureSummary, GroupSummary, NumericSummary, Proportion};

use crate::dataset::{Cohort, Endpoint, Group};
use crate::error::Result;

/// Every (group, endpoint) pair, endpoint-major.
pub fn all_problems() -> Vec<(Group, Endpoint)> {
    Endpoint::EVERY
        .iter()
        .flat_map(|&e| Group::EVERY.iter().map(move |&g| (g, e)))
        .collect()
}

/// Runs `problems` with `template`'s protocol and collects one report.
pub fn run_problems(
    cohort: &Cohort,
    template: &ExperimentPlan,
    problems: &[(Group, Endpoint)],
) -> Result<(RunReport, Vec<RunResult>)> {
    let mut reports = Vec::with_capacity(problems.len());
    let mut results = Vec::with_capacity(problems.len());
    for &(g, e) in problems {
        let plan = template.for_problem(g, e);
        let result = run_problem(cohort, &plan)?;
        reports.push(ProblemReport::new(&plan, &result)?);
        results.push(result);
    }
    Ok((
        RunReport {
            master_seed: template.master_seed,
            problems: reports,
        },
        results,
    ))
}

#[cfg(test)]
mod tests;
