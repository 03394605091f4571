//! Generates a synthetic registry cohort, writes it as CSV and prints its
//! headline numbers.

use stroke_rf::dataset::{generate_synthetic_cohort, CohortSpec, StrokeType, NIHSS48};

fn main() -> stroke_rf::Result<()> {
    let mut spec = CohortSpec::registry_default();
    spec.n_total = 2000;
    let cohort = generate_synthetic_cohort(&spec, 7)?;

    let n = cohort.len() as f64;
    let is = cohort.count_type(StrokeType::Is) as f64;
    let deaths = cohort.labels().iter().filter(|l| l.mortality).count() as f64;
    let morbid = cohort.labels().iter().filter(|l| l.morbidity).count() as f64;
    println!("records      {}", cohort.len());
    println!("ischemic     {:.1}%", 100.0 * is / n);
    println!("mortality    {:.1}%", 100.0 * deaths / n);
    println!("morbidity    {:.1}%", 100.0 * morbid / n);

    let nihss48: Vec<f64> = cohort.column(NIHSS48)?.into_iter().flatten().collect();
    let summary = stroke_rf::stats::describe(&nihss48)?;
    println!("NIHSS48      median {} [{}, {}]", summary.median, summary.q1, summary.q3);

    let path = std::env::temp_dir().join("synthetic_cohort.csv");
    cohort.write_csv(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
