//! Compares per-run AUC vectors: Shapiro-Wilk on each vector and the pool,
//! then Wilcoxon signed-rank (or a paired t-test) for every pair.

use stroke_rf::experiment::compare_groups;

fn main() -> stroke_rf::Result<()> {
    let wave = |shift: f64, k: usize| -> Vec<f64> {
        (0..40).map(|i| 0.88 + shift + 0.02 * ((i * k % 23) as f64 / 23.0 - 0.5)).collect()
    };
    let vectors = vec![
        ("all_mortality".to_string(), wave(0.03, 37)),
        ("is_mortality".to_string(), wave(0.025, 41)),
        ("ich_mortality".to_string(), wave(0.0, 43)),
    ];
    let report = compare_groups(&vectors)?;
    for n in &report.normality {
        match &n.shapiro_wilk {
            Some(sw) => println!("{:<14} W {:.4} p {:.3}", n.name, sw.statistic, sw.p_value),
            None => println!("{:<14} {}", n.name, n.note.as_deref().unwrap_or("")),
        }
    }
    println!("test: {:?}", report.test);
    for p in &report.pairs {
        println!("{} vs {}: p {:.2e} reject {}", p.a, p.b, p.p_value, p.reject);
    }
    Ok(())
}
