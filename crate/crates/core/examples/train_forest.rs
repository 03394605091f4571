//! Trains a forest on two noisy features, predicts a few rows and round
//! trips the model through JSON.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stroke_rf::forest::{train_forest, Forest, ForestConfig, Matrix};

fn main() -> stroke_rf::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 400;
    let (mut a, mut b, mut y) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        a.push(u);
        b.push(v);
        y.push(u + 0.3 * v + rng.gen_range(-0.15..0.15) > 0.65);
    }
    let x = Matrix::from_columns(vec!["a".into(), "b".into()], vec![a, b])?;

    let config = ForestConfig { n_trees: 200, seed: 1, ..ForestConfig::default() };
    let forest = train_forest(&x, &y, &config)?;
    for row in [[0.1, 0.1], [0.5, 0.5], [0.9, 0.2]] {
        println!("P(y | a={}, b={}) = {:.3}", row[0], row[1], forest.predict_proba(&row));
    }

    let back = Forest::from_json(&forest.to_json()?)?;
    assert_eq!(back.predict_matrix(&x)?, forest.predict_matrix(&x)?);
    println!("{} trees survive a JSON round trip", back.trees.len());
    Ok(())
}
