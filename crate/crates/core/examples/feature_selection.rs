//! Ranks candidate variables by the absolute two-sample t statistic between
//! survivors and deaths, then keeps the top seven.

use stroke_rf::dataset::{generate_synthetic_cohort, CohortSpec, Endpoint, MorbidityPopulation};
use stroke_rf::preprocess::{binary_target, score_features_ttest, select_p_threshold, select_top_k};
use stroke_rf::stats::TTestKind;

fn main() -> stroke_rf::Result<()> {
    let mut spec = CohortSpec::registry_default();
    spec.n_total = 2000;
    let cohort = generate_synthetic_cohort(&spec, 11)?;
    let (population, labels) =
        binary_target(&cohort, Endpoint::Mortality, MorbidityPopulation::default());

    let candidates: Vec<String> = [
        "AGE", "NIHSS0", "NIHSS24", "NIHSS48", "ED", "T0", "GLU0", "LEU0", "SBP", "LDL", "FEMALE",
    ]
    .map(String::from)
    .to_vec();
    let report = score_features_ttest(&population, &labels, &candidates, TTestKind::Welch)?;
    for score in &report.scores {
        println!("{:<8} |t| {:>7.2}  p {:.2e}", score.feature, score.abs_t, score.p_value);
    }
    println!("top 7:     {:?}", select_top_k(&report, 7)?.selected);
    println!("p < 1e-10: {:?}", select_p_threshold(&report, 1e-10)?.selected);
    Ok(())
}
