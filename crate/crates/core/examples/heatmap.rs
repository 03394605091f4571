//! Decision surface of a mortality model over NIHSS48 × NIHSS24 with the
//! other variables held at their median, plus misclassified patients.

use stroke_rf::dataset::{generate_synthetic_cohort, CohortSpec, Endpoint, Group, NIHSS24, NIHSS48};
use stroke_rf::experiment::{
    annotate_misclassified, fit_final_model, heatmap_grid, write_heatmap_csv, ExperimentPlan, TreePolicy,
};
use stroke_rf::preprocess::binary_target;

fn main() -> stroke_rf::Result<()> {
    let mut spec = CohortSpec::registry_default();
    spec.n_total = 1500;
    let cohort = generate_synthetic_cohort(&spec, 4)?;
    let plan = ExperimentPlan {
        trees: TreePolicy::Fixed { n_trees: 150 },
        ..ExperimentPlan::new(Group::All, Endpoint::Mortality, 4)
    };
    let model = fit_final_model(&cohort, &plan)?;
    println!("model features: {:?}", model.forest.feature_names);

    let (kept, _) = cohort.apply_exclusions();
    let population = kept.filter_group(Group::All);
    let (population, labels) = binary_target(&population, Endpoint::Mortality, plan.morbidity_population);
    let filled = model.impute(&population)?;

    let mut grid = heatmap_grid(&model.forest, &filled, NIHSS48, NIHSS24, 11)?;
    annotate_misclassified(&mut grid, &model.forest, &filled, &labels, plan.threshold)?;
    for (iy, y) in grid.y_values.iter().enumerate().rev() {
        let row: String = (0..grid.x_values.len())
            .map(|ix| match grid.cell(ix, iy) {
                p if p >= 0.75 => '#',
                p if p >= 0.5 => '+',
                p if p >= 0.25 => '.',
                _ => ' ',
            })
            .collect();
        println!("{y:>5.1} |{row}|");
    }
    println!("{} misclassified patients", grid.misclassified.len());

    let path = std::env::temp_dir().join("heatmap.csv");
    write_heatmap_csv(&grid, std::fs::File::create(&path).map_err(|e| stroke_rf::Error::io(&path, e))?)?;
    println!("wrote {}", path.display());
    Ok(())
}
