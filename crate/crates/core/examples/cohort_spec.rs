//! Prints the registry-calibrated cohort spec as JSON. Edit it and pass it
//! back with `stroke-rf generate --config spec.json`.

use stroke_rf::dataset::CohortSpec;

fn main() -> stroke_rf::Result<()> {
    let spec = CohortSpec::registry_default();
    println!("{}", serde_json::to_string_pretty(&spec)?);
    let expected = spec.expected_prevalences();
    eprintln!(
        "expected mortality {:.3}, morbidity {:.3}",
        expected.mortality, expected.morbidity
    );
    Ok(())
}
