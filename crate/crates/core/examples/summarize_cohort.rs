//! Descriptive table per stroke group: outcome rates and, for a few
//! variables, mean ± SD or the share of positives.

use stroke_rf::dataset::{generate_synthetic_cohort, CohortSpec};
use stroke_rf::experiment::summarize_cohort;

const SHOWN: [&str; 6] = ["AGE", "FEMALE", "NIHSS0", "NIHSS48", "GLU0", "T0"];

fn main() -> stroke_rf::Result<()> {
    let mut spec = CohortSpec::registry_default();
    spec.n_total = 1500;
    let cohort = generate_synthetic_cohort(&spec, 3)?;
    let summary = summarize_cohort(&cohort)?;

    println!("input {} records, excluded {}", summary.n_input, summary.exclusions.total());
    for g in &summary.groups {
        println!(
            "\n{} (n={}): mortality {:.1}%, morbidity {:.1}%",
            g.group.as_str(),
            g.n,
            g.mortality.percent,
            g.morbidity.percent
        );
        for f in g.features.iter().filter(|f| SHOWN.contains(&f.feature.as_str())) {
            match (&f.numeric, &f.positive) {
                (Some(s), _) => println!("  {:<8} {:>8.1} ± {:.1}", f.feature, s.mean, s.sd),
                (_, Some(p)) => println!("  {:<8} {:>8.1}%", f.feature, p.percent),
                _ => println!("  {:<8} all missing", f.feature),
            }
        }
    }
    Ok(())
}
