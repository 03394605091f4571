//! Repeated cross-validation of one problem (all patients, mortality) with
//! per-fold imputation and feature selection, then the aggregate summary.

use stroke_rf::dataset::{generate_synthetic_cohort, CohortSpec, Endpoint, Group};
use stroke_rf::experiment::{aggregate, run_problem, ExperimentPlan, TreePolicy};

fn main() -> stroke_rf::Result<()> {
    let mut spec = CohortSpec::registry_default();
    spec.n_total = 1500;
    let cohort = generate_synthetic_cohort(&spec, 8)?;

    let plan = ExperimentPlan {
        repetitions: 3,
        folds: 5,
        trees: TreePolicy::Fixed { n_trees: 100 },
        ..ExperimentPlan::new(Group::All, Endpoint::Mortality, 8)
    };
    let result = run_problem(&cohort, &plan)?;
    let summary = aggregate(&result)?;

    println!(
        "{} records, {} deaths, {} candidate variables",
        result.n_records,
        result.n_positive,
        result.candidates.len()
    );
    println!(
        "AUC mean {:.3} median {:.3} sd {:.3} over {} runs",
        summary.auc.mean, summary.auc.median, summary.auc.sd, summary.n_runs
    );
    println!("accuracy mean {:.3}", summary.accuracy.mean);
    for s in summary.importance.iter().take(7) {
        println!(
            "  #{} {:<8} gini sum {:.3}, selected {}x",
            s.gini_rank, s.feature, s.gini_sum, s.times_selected
        );
    }
    Ok(())
}
