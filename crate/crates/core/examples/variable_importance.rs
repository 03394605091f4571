//! Gini (mean decrease in impurity) and permutation (out-of-bag accuracy
//! drop) importance of the seven shortlisted variables for mortality.

use stroke_rf::dataset::{
    generate_synthetic_cohort, CohortSpec, Endpoint, MorbidityPopulation, SHORTLIST,
};
use stroke_rf::forest::{train_forest, ForestConfig, ImportanceReport};
use stroke_rf::preprocess::{binary_target, design_matrix, Imputer};

fn main() -> stroke_rf::Result<()> {
    let mut spec = CohortSpec::registry_default();
    spec.n_total = 2000;
    let cohort = generate_synthetic_cohort(&spec, 21)?;
    let (population, labels) =
        binary_target(&cohort, Endpoint::Mortality, MorbidityPopulation::default());

    let features: Vec<String> = SHORTLIST.map(String::from).to_vec();
    let filled = Imputer::fit_subset(&population, &features)?.apply(&population);
    let x = design_matrix(&filled, &features)?;
    let forest = train_forest(&x, &labels, &ForestConfig { n_trees: 300, seed: 2, ..Default::default() })?;

    let mut report = ImportanceReport::compute(&forest, &x, &labels, 3)?;
    report.features.sort_by(|a, b| b.gini.total_cmp(&a.gini));
    println!("{:<8} {:>8} {:>12}", "feature", "gini", "permutation");
    for f in &report.features {
        println!("{:<8} {:>8.4} {:>12.4}", f.feature, f.gini, f.permutation);
    }
    Ok(())
}
