//! ROC curve, trapezoid AUC with a DeLong interval, accuracy at 0.5 and
//! the single-variable ROC of NIHSS48 for mortality.

use stroke_rf::dataset::{generate_synthetic_cohort, CohortSpec, Endpoint, MorbidityPopulation};
use stroke_rf::eval::{accuracy, auc_ci, mann_whitney_auc, roc_curve, single_variable_roc, write_roc_csv};

fn main() -> stroke_rf::Result<()> {
    let scores = [0.95, 0.9, 0.8, 0.7, 0.65, 0.6, 0.4, 0.35, 0.3, 0.1];
    let labels = [true, true, false, true, true, false, false, true, false, false];

    let curve = roc_curve(&scores, &labels)?;
    write_roc_csv(&curve, std::io::stdout())?;
    let r = auc_ci(&scores, &labels)?;
    println!("AUC {:.3} (95% CI {:.3} to {:.3})", r.auc, r.ci_low, r.ci_high);
    println!("Mann-Whitney {:.3}", mann_whitney_auc(&scores, &labels)?);
    let (acc, cm) = accuracy(&scores, &labels, 0.5)?;
    println!("accuracy {acc:.2} {cm:?}");

    let mut spec = CohortSpec::registry_default();
    spec.n_total = 2000;
    let cohort = generate_synthetic_cohort(&spec, 1)?;
    let single = single_variable_roc(&cohort, "NIHSS48", Endpoint::Mortality, MorbidityPopulation::default())?;
    println!(
        "NIHSS48 alone: AUC {:.3} on {} deaths / {} survivors",
        single.auc.auc, single.n_pos, single.n_neg
    );
    Ok(())
}
