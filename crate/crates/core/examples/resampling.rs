//! One repetition of the resampling plan: shuffle, undersample the majority
//! class and split into stratified folds.

use stroke_rf::preprocess::build_resample_plan;

fn main() -> stroke_rf::Result<()> {
    // 1 in 6 positive
    let labels: Vec<bool> = (0..600).map(|i| i % 6 == 0).collect();
    let plan = build_resample_plan(42, 3, 10)?;

    for r in 0..plan.repetitions.len() {
        let rep = plan.realize(r, &labels, true)?;
        let positives = rep.kept.iter().filter(|&&i| labels[i]).count();
        println!("repetition {r}: kept {} ({positives} positive)", rep.kept.len());
        let per_fold: Vec<(usize, usize)> = (0..plan.k)
            .map(|f| {
                let test = rep.folds.test_indices(f);
                let pos = test.iter().filter(|&&p| labels[rep.kept[p]]).count();
                (test.len(), pos)
            })
            .collect();
        println!("  fold (size, positives): {per_fold:?}");
    }
    Ok(())
}
