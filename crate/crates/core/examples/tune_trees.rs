//! Chooses the number of trees by inner cross-validated AUC over a small
//! grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stroke_rf::forest::{tune_num_trees, ForestConfig, Matrix, TreeGrid};

fn main() -> stroke_rf::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rows: Vec<Vec<f64>> = (0..300).map(|_| (0..4).map(|_| rng.gen()).collect()).collect();
    let y: Vec<bool> = rows
        .iter()
        .map(|r| r[0] + r[1] + rng.gen_range(-0.4..0.4) > 1.0)
        .collect();
    let names = ["f0", "f1", "f2", "f3"].map(String::from).to_vec();
    let x = Matrix::from_rows(names, &rows)?;

    let grid = TreeGrid { min: 20, max: 100, step: 20 };
    let result = tune_num_trees(&x, &y, grid, 5, &ForestConfig::default(), 4)?;
    for row in &result.table {
        println!("{:>4} trees  mean AUC {:.4}", row.n_trees, row.mean_auc);
    }
    println!("chosen: {}", result.best_n_trees);
    Ok(())
}
