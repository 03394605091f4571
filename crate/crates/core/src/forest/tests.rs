use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use super::*;
use crate::seed::rng_from;

fn names(p: usize) -> Vec<String> {
    (0..p).map(|i| format!("f{i}")).collect()
}

fn fixed_tree_config() -> ForestConfig {
    ForestConfig {
        n_trees: 1,
        mtry: None,
        bootstrap: false,
        ..ForestConfig::default()
    }
}

/// Two Gaussian classes `gap` standard deviations apart on feature 0 plus
/// `noise` uninformative features.
fn separated(n: usize, gap: f64, noise: usize, seed: u64) -> (Matrix, Vec<bool>) {
    let mut rng = rng_from(seed);
    let y: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
    let mut cols = vec![y
        .iter()
        .map(|&l| rng.sample::<f64, _>(StandardNormal) + if l { gap } else { 0.0 })
        .collect::<Vec<f64>>()];
    for _ in 0..noise {
        cols.push((0..n).map(|_| rng.sample(StandardNormal)).collect());
    }
    (Matrix::from_columns(names(1 + noise), cols).unwrap(), y)
}

#[test]
fn separable_feature_gives_a_stump() {
    let x = Matrix::from_columns(names(1), vec![vec![1.0, 2.0, 3.0, 10.0, 11.0, 12.0]]).unwrap();
    let y = [false, false, false, true, true, true];
    let (tree, oob) =
        train_tree(&x, &y, &[0, 1, 2, 3, 4, 5], &fixed_tree_config(), &mut rng_from(1)).unwrap();
    assert!(oob.is_empty());
    assert_eq!(tree.depth(), 1);
    for (i, &l) in y.iter().enumerate() {
        assert_eq!(tree.vote(|j| x.value(i, j)), l as u8 as f64);
    }
}

#[test]
fn identical_rows_make_one_mixed_leaf() {
    let x = Matrix::from_columns(names(2), vec![vec![1.0; 3], vec![4.0; 3]]).unwrap();
    let (tree, _) =
        train_tree(&x, &[true, true, false], &[0, 1, 2], &fixed_tree_config(), &mut rng_from(0)).unwrap();
    assert_eq!(tree, TreeNode::Leaf { class_counts: [1, 2] });
}

#[test]
fn distinct_rows_are_memorised() {
    let (x, y) = separated(60, 0.5, 2, 3);
    let (tree, _) =
        train_tree(&x, &y, &(0..60).collect::<Vec<_>>(), &fixed_tree_config(), &mut rng_from(9)).unwrap();
    for i in 0..60 {
        assert_eq!(tree.vote(|j| x.value(i, j)), y[i] as u8 as f64);
    }
}

#[test]
fn max_depth_and_min_leaf_bound_the_tree() {
    let (x, y) = separated(80, 0.5, 2, 4);
    let rows: Vec<usize> = (0..80).collect();
    let config = ForestConfig {
        max_depth: Some(2),
        ..fixed_tree_config()
    };
    assert!(train_tree(&x, &y, &rows, &config, &mut rng_from(1)).unwrap().0.depth() <= 2);
    let config = ForestConfig {
        min_leaf: 10,
        ..fixed_tree_config()
    };
    let (tree, _) = train_tree(&x, &y, &rows, &config, &mut rng_from(1)).unwrap();
    fn check(node: &TreeNode) {
        match node {
            TreeNode::Leaf { class_counts } => assert!(class_counts[0] + class_counts[1] >= 10),
            TreeNode::Split { left, right, .. } => {
                check(left);
                check(right)
            }
        }
    }
    check(&tree);
}

#[test]
fn same_stream_same_tree() {
    let (x, y) = separated(100, 1.0, 3, 5);
    let rows: Vec<usize> = (0..100).collect();
    let config = ForestConfig::default();
    let a = train_tree(&x, &y, &rows, &config, &mut rng_from(42)).unwrap();
    let b = train_tree(&x, &y, &rows, &config, &mut rng_from(42)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn forest_is_independent_of_thread_count() {
    let (x, y) = separated(150, 1.0, 4, 6);
    let config = ForestConfig {
        n_trees: 40,
        seed: 11,
        ..ForestConfig::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| train_forest(&x, &y, &config).unwrap())
    };
    let one = run(1);
    assert_eq!(one.to_json().unwrap(), run(3).to_json().unwrap());
    assert_eq!(one.trees.len(), 40);
}

#[test]
fn single_tree_forest_predicts_like_its_tree() {
    let (x, y) = separated(50, 1.0, 1, 7);
    let forest = train_forest(&x, &y, &ForestConfig { n_trees: 1, seed: 3, ..Default::default() }).unwrap();
    for i in 0..50 {
        let row = x.row(i);
        assert_eq!(forest.predict_proba(&row), forest.trees[0].vote(|j| row[j]));
    }
}

#[test]
fn votes_average_with_half_ties() {
    let leaf = |n, p| TreeNode::Leaf { class_counts: [n, p] };
    let mut forest = train_forest(
        &Matrix::from_columns(names(1), vec![vec![0.0, 1.0]]).unwrap(),
        &[false, true],
        &ForestConfig { n_trees: 4, bootstrap: false, ..Default::default() },
    )
    .unwrap();
    forest.trees = vec![leaf(0, 3), leaf(1, 2), leaf(0, 1), leaf(4, 0)];
    assert_eq!(forest.predict_proba(&[0.0]), 0.75);
    forest.trees[3] = leaf(2, 2);
    assert_eq!(forest.predict_proba(&[0.0]), 0.875);
    forest.trees = vec![leaf(3, 0); 4];
    assert_eq!(forest.predict_proba(&[0.0]), 0.0);
}

#[test]
fn separated_classes_have_high_oob_accuracy() {
    let (x, y) = separated(300, 10.0, 2, 8);
    let forest = train_forest(&x, &y, &ForestConfig { n_trees: 500, seed: 1, ..Default::default() }).unwrap();
    let (mut hits, mut total) = (0usize, 0usize);
    for i in 0..300 {
        let (mut votes, mut n) = (0.0, 0);
        for (tree, oob) in forest.trees.iter().zip(&forest.oob) {
            if oob.contains(&i) {
                votes += tree.vote(|j| x.value(i, j));
                n += 1;
            }
        }
        if n > 0 {
            total += 1;
            hits += ((votes / n as f64 >= 0.5) == y[i]) as usize;
        }
    }
    assert!(hits as f64 / total as f64 >= 0.95);
}

#[test]
fn named_prediction_requires_every_feature() {
    let (x, y) = separated(30, 2.0, 1, 9);
    let forest = train_forest(&x, &y, &ForestConfig { n_trees: 5, ..Default::default() }).unwrap();
    assert!(forest.predict_proba_named(|n| (n == "f0").then_some(1.0)).is_err());
    let p = forest.predict_proba_named(|_| Some(1.0)).unwrap();
    assert!((0.0..=1.0).contains(&p));
}

#[test]
fn json_round_trip_and_version_check() {
    let (x, y) = separated(40, 2.0, 1, 10);
    let forest = train_forest(&x, &y, &ForestConfig { n_trees: 3, ..Default::default() }).unwrap();
    let text = forest.to_json().unwrap();
    assert_eq!(Forest::from_json(&text).unwrap(), forest);
    let bumped = text.replacen("\"schema_version\":1", "\"schema_version\":99", 1);
    assert!(matches!(Forest::from_json(&bumped), Err(Error::Config(_))));
}

#[test]
fn prefix_equals_smaller_forest() {
    let (x, y) = separated(60, 1.0, 2, 12);
    let config = ForestConfig { n_trees: 30, seed: 5, ..Default::default() };
    let big = train_forest(&x, &y, &config).unwrap();
    let small = train_forest(&x, &y, &ForestConfig { n_trees: 10, ..config }).unwrap();
    assert_eq!(big.truncated(10), small);
}

#[test]
fn config_validation() {
    let x = Matrix::from_columns(names(2), vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let y = [false, true];
    for bad in [
        ForestConfig { n_trees: 0, ..Default::default() },
        ForestConfig { min_leaf: 0, ..Default::default() },
        ForestConfig { mtry: Some(3), ..Default::default() },
        ForestConfig { bootstrap_fraction: 0.0, ..Default::default() },
    ] {
        assert!(train_forest(&x, &y, &bad).is_err());
    }
    assert_eq!(ForestConfig::default().resolve_mtry(7).unwrap(), 2);
}

#[test]
fn hand_built_tree_importance() {
    // 8 rows: root on f0 splits (4 neg, 4 pos) into (3,1) | (1,3); left on
    // f1 splits (3,1) into (3,0) | (0,1).
    let leaf = |n, p| Box::new(TreeNode::Leaf { class_counts: [n, p] });
    let d_root = 0.5 - 0.5 * 0.375 - 0.5 * 0.375;
    let d_left = 0.375;
    let tree = TreeNode::Split {
        feature: 0,
        threshold: 0.5,
        impurity_decrease: d_root,
        n_node: 8,
        left: Box::new(TreeNode::Split {
            feature: 1,
            threshold: 0.5,
            impurity_decrease: d_left,
            n_node: 4,
            left: leaf(3, 0),
            right: leaf(0, 1),
        }),
        right: leaf(1, 3),
    };
    let forest = Forest {
        schema_version: FOREST_SCHEMA_VERSION,
        config: ForestConfig { n_trees: 2, ..Default::default() },
        feature_names: names(3),
        n_train: 8,
        trees: vec![tree.clone(), tree],
        oob: vec![vec![], vec![]],
    };
    let g = gini_importance(&forest);
    assert_eq!(g, vec![d_root, 0.5 * d_left, 0.0]);
}

#[test]
fn single_feature_takes_all_importance() {
    let (x, y) = separated(80, 1.0, 0, 13);
    let forest = train_forest(&x, &y, &ForestConfig { n_trees: 10, ..Default::default() }).unwrap();
    let g = gini_importance(&forest);
    assert_eq!(g.len(), 1);
    assert!(g[0] > 0.0);
}

#[test]
fn mdi_is_order_invariant_and_sums_per_tree() {
    let (x, y) = separated(80, 1.0, 3, 14);
    let mut forest = train_forest(&x, &y, &ForestConfig { n_trees: 12, seed: 2, ..Default::default() }).unwrap();
    let g = gini_importance(&forest);
    let per_tree: f64 = forest
        .trees
        .iter()
        .map(|t| {
            let root = t.n_node() as f64;
            let mut s = 0.0;
            t.for_each_split(&mut |_, n, d| s += n as f64 / root * d);
            s
        })
        .sum();
    assert!((g.iter().sum::<f64>() - per_tree / 12.0).abs() < 1e-12);
    forest.trees.reverse();
    let r = gini_importance(&forest);
    for (a, b) in g.iter().zip(&r) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn noise_feature_ranks_below_signal() {
    let mut wins = 0;
    for seed in 0..100 {
        let (x, y) = separated(120, 1.5, 1, 1000 + seed);
        let forest = train_forest(&x, &y, &ForestConfig { n_trees: 20, seed, ..Default::default() }).unwrap();
        let g = gini_importance(&forest);
        wins += (g[1] < g[0]) as usize;
    }
    assert!(wins >= 95, "{wins}");
}

#[test]
fn permutation_importance_properties() {
    let (x, y) = separated(200, 4.0, 1, 15);
    // a constant column can never be split on
    let mut cols: Vec<Vec<f64>> = (0..2).map(|j| x.column(j).to_vec()).collect();
    cols.push(vec![3.0; 200]);
    let x = Matrix::from_columns(names(3), cols).unwrap();
    let forest = train_forest(&x, &y, &ForestConfig { n_trees: 50, seed: 4, ..Default::default() }).unwrap();
    let a = permutation_importance(&forest, &x, &y, 7).unwrap();
    assert_eq!(a[2], 0.0);
    assert!(a[0] > 0.0);
    assert_eq!(a, permutation_importance(&forest, &x, &y, 7).unwrap());
    let report = ImportanceReport::compute(&forest, &x, &y, 7).unwrap();
    assert_eq!(report.features.len(), 3);
    assert!(report.features.iter().all(|f| f.gini >= 0.0));
}

#[test]
fn permutation_importance_needs_oob_rows() {
    let (x, y) = separated(40, 2.0, 1, 16);
    let forest = train_forest(&x, &y, &ForestConfig { n_trees: 3, bootstrap: false, ..Default::default() }).unwrap();
    assert!(matches!(permutation_importance(&forest, &x, &y, 1), Err(Error::InsufficientData(_))));
}

#[test]
fn tuning_stays_on_the_grid() {
    let (x, y) = separated(100, 1.0, 2, 17);
    let base = ForestConfig::default();
    let r = tune_num_trees(&x, &y, TreeGrid { min: 10, max: 30, step: 10 }, 3, &base, 5).unwrap();
    assert!([10, 20, 30].contains(&r.best_n_trees));
    assert_eq!(r.table.len(), 3);
    let one = tune_num_trees(&x, &y, TreeGrid { min: 20, max: 20, step: 10 }, 3, &base, 5).unwrap();
    assert_eq!(one.best_n_trees, 20);
    assert!(TreeGrid { min: 30, max: 10, step: 10 }.candidates().is_err());
    assert_eq!(TreeGrid::default().candidates().unwrap(), vec![500, 600, 700, 800, 900, 1000]);
}

#[test]
fn tuning_ties_go_to_fewer_trees() {
    // perfectly separable: every candidate reaches AUC 1
    let (x, y) = separated(60, 20.0, 0, 18);
    let r = tune_num_trees(&x, &y, TreeGrid { min: 5, max: 25, step: 5 }, 3, &ForestConfig::default(), 1).unwrap();
    assert!(r.table.iter().all(|row| row.mean_auc == 1.0));
    assert_eq!(r.best_n_trees, 5);
}

/// Exhaustive split search written from the definition: every feature,
/// every midpoint, float decrease, ties within 1e-12 to the lower
/// (feature, threshold).
fn brute_force(x: &Matrix, y: &[bool], rows: &[usize], min_leaf: usize) -> Option<Split> {
    let count = |rs: &[usize]| {
        let p = rs.iter().filter(|&&r| y[r]).count() as u64;
        [rs.len() as u64 - p, p]
    };
    let parent = count(rows);
    let gp = gini_impurity(parent).ok()?;
    let n = rows.len() as f64;
    let mut best: Option<Split> = None;
    for f in 0..x.n_features() {
        let mut vals: Vec<f64> = rows.iter().map(|&r| x.value(r, f)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x.value(i, f) <= t);
            if l.len() < min_leaf || r.len() < min_leaf {
                continue;
            }
            let d = gp
                - l.len() as f64 / n * gini_impurity(count(&l)).unwrap()
                - r.len() as f64 / n * gini_impurity(count(&r)).unwrap();
            if d <= 1e-12 {
                continue;
            }
            if best.map_or(true, |b| d > b.decrease + 1e-12) {
                best = Some(Split { feature: f, threshold: t, decrease: d });
            }
        }
    }
    best
}

fn split_instance() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>, usize)> {
    (2usize..=8, 1usize..=3).prop_flat_map(|(n, p)| {
        (
            prop::collection::vec(prop::collection::vec((0u8..5).prop_map(f64::from), n), p),
            prop::collection::vec(any::<bool>(), n),
            1usize..=3,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn best_split_matches_exhaustive_search((cols, y, min_leaf) in split_instance()) {
        let p = cols.len();
        let x = Matrix::from_columns(names(p), cols).unwrap();
        let rows: Vec<usize> = (0..y.len()).collect();
        let all: Vec<usize> = (0..p).collect();
        let got = best_split(&x, &y, &rows, &all, min_leaf);
        let want = brute_force(&x, &y, &rows, min_leaf);
        match (got, want) {
            (None, None) => {}
            (Some(g), Some(w)) => {
                prop_assert_eq!(g.feature, w.feature);
                prop_assert_eq!(g.threshold, w.threshold);
                prop_assert!((g.decrease - w.decrease).abs() < 1e-12);
            }
            other => prop_assert!(false, "mismatch {:?}", other),
        }
    }

    #[test]
    fn proba_in_unit_interval(seed in 0u64..1000) {
        let (x, y) = separated(30, 1.0, 1, seed);
        let forest = train_forest(&x, &y, &ForestConfig { n_trees: 7, seed, ..Default::default() }).unwrap();
        for p in forest.predict_matrix(&x).unwrap() {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
