use std::sync::Arc;

use rand::Rng;

use super::*;
use crate::dataset::{read_cohort_csv, FeatureCodebook, MorbidityPopulation, Provenance};
use crate::error::Error;
use crate::eval::{AucResult, ConfusionMatrix};
use crate::forest::{Forest, ForestConfig, TreeNode, FOREST_SCHEMA_VERSION};
use crate::seed::rng_from;
use crate::stats::mean;

/// 40 patients, half dead; NIHSS48 carries the signal.
fn toy_cohort(seed: u64) -> Cohort {
    let mut rng = rng_from(seed);
    let mut text = String::from("NIHSS0,NIHSS24,NIHSS48,GLU0,T0,mrs_3m,stroke_type,died_first_24h,lost_followup\n");
    for i in 0..40 {
        let dead = i % 2 == 0;
        let base: f64 = rng.gen_range(0.0..10.0);
        let n48 = if dead { base + 12.0 } else { base };
        let glu = if i % 7 == 0 { String::new() } else { format!("{:.1}", rng.gen_range(90.0..180.0)) };
        text += &format!(
            "{:.0},{:.0},{:.0},{glu},{:.1},{},{},0,0\n",
            base,
            (base + n48) / 2.0,
            n48,
            rng.gen_range(36.0..37.5),
            if dead { 6 } else { i % 6 },
            if i % 4 == 1 { "ICH" } else { "IS" },
        );
    }
    read_cohort_csv(text.as_bytes(), Arc::new(FeatureCodebook::stroke_registry()), Provenance::Synthetic { seed }).unwrap()
}

fn quick_plan(group: Group, endpoint: Endpoint) -> ExperimentPlan {
    ExperimentPlan {
        repetitions: 1,
        folds: 2,
        k_features: 3,
        trees: TreePolicy::Fixed { n_trees: 15 },
        ..ExperimentPlan::new(group, endpoint, 3)
    }
}

#[test]
fn plan_defaults_and_validation() {
    let p = ExperimentPlan::default();
    assert_eq!((p.repetitions, p.folds, p.k_features), (100, 10, 7));
    assert_eq!(p.trees, TreePolicy::Tune { grid: crate::forest::TreeGrid::default(), inner_folds: 5 });
    assert_eq!(p.selection_scope, SelectionScope::PerFold);
    p.validate().unwrap();
    for bad in [
        ExperimentPlan { repetitions: 0, ..p.clone() },
        ExperimentPlan { folds: 1, ..p.clone() },
        ExperimentPlan { k_features: 0, ..p.clone() },
        ExperimentPlan { trees: TreePolicy::Fixed { n_trees: 0 }, ..p.clone() },
        ExperimentPlan { threshold: 1.0, ..p.clone() },
    ] {
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
    }
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<ExperimentPlan>(&text).unwrap(), p);
    // partial configs fill the rest from defaults
    let partial: ExperimentPlan = serde_json::from_str(r#"{"repetitions": 20, "trees": {"policy": "fixed", "n_trees": 500}}"#).unwrap();
    assert_eq!(partial.repetitions, 20);
    assert_eq!(partial.folds, 10);
}

#[test]
fn problem_seeds_are_distinct() {
    let plan = ExperimentPlan::new(Group::All, Endpoint::Mortality, 5);
    let mut seeds: Vec<u64> = all_problems().iter().map(|&(g, e)| plan.for_problem(g, e).problem_seed()).collect();
    assert_eq!(seeds.len(), 6);
    seeds.sort();
    seeds.dedup();
    assert_eq!(seeds.len(), 6);
}

#[test]
fn one_repetition_two_folds_gives_two_entries() {
    let r = run_problem(&toy_cohort(1), &quick_plan(Group::All, Endpoint::Mortality)).unwrap();
    assert_eq!(r.runs.len(), 2);
    assert_eq!((r.n_positive, r.n_negative), (20, 20));
    assert_eq!(r.out_of_fold.records.len(), 40);
    for run in &r.runs {
        assert!((0.0..=1.0).contains(&run.auc.auc));
        assert_eq!(run.selected.len(), 3);
        assert_eq!(run.importance.len(), 3);
        assert_eq!(run.confusion.total(), run.n_test);
    }
    assert!(r.runs.iter().all(|run| run.selected.contains(&"NIHSS48".to_string())));
}

#[test]
fn run_is_deterministic() {
    let c = toy_cohort(2);
    let plan = ExperimentPlan { repetitions: 2, ..quick_plan(Group::All, Endpoint::Mortality) };
    let a = to_json_string(&run_problem(&c, &plan).unwrap()).unwrap();
    let b = to_json_string(&run_problem(&c, &plan).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = run_problem(&c, &ExperimentPlan { master_seed: 4, ..plan }).unwrap();
    assert_ne!(a, to_json_string(&other).unwrap());
}

#[test]
fn problems_do_not_share_random_state() {
    let c = toy_cohort(3);
    let template = quick_plan(Group::All, Endpoint::Mortality);
    let (both, _) = run_problems(&c, &template, &[(Group::All, Endpoint::Mortality), (Group::All, Endpoint::Morbidity)]).unwrap();
    let (alone, _) = run_problems(&c, &template, &[(Group::All, Endpoint::Morbidity)]).unwrap();
    assert_eq!(both.problems[1], alone.problems[0]);
}

#[test]
fn global_selection_and_tuning() {
    let c = toy_cohort(4);
    let plan = ExperimentPlan {
        selection_scope: SelectionScope::Global,
        trees: TreePolicy::Tune { grid: crate::forest::TreeGrid { min: 5, max: 15, step: 5 }, inner_folds: 2 },
        ..quick_plan(Group::All, Endpoint::Mortality)
    };
    let r = run_problem(&c, &plan).unwrap();
    assert_eq!(r.runs[0].selected, r.runs[1].selected);
    for run in &r.runs {
        assert!([5, 10, 15].contains(&run.n_trees));
        assert_eq!(run.tuning.as_ref().unwrap().len(), 3);
    }
}

#[test]
fn run_errors_carry_context() {
    // 5 positives cannot fill 10 folds
    let c = toy_cohort(5);
    let plan = ExperimentPlan { folds: 10, ..quick_plan(Group::All, Endpoint::Mortality) };
    let small = c.select(&(0..30).filter(|i| i % 2 == 1 || *i < 10).collect::<Vec<_>>());
    match run_problem(&small, &plan) {
        Err(Error::InFold { repetition: 0, .. }) => {}
        other => panic!("{other:?}"),
    }
    let no_boot = ExperimentPlan {
        candidates: Some(vec!["NOPE".into()]),
        ..quick_plan(Group::All, Endpoint::Mortality)
    };
    assert!(matches!(run_problem(&c, &no_boot), Err(Error::UnknownFeature(_))));
}

#[test]
fn ich_group_uses_only_its_patients() {
    let c = toy_cohort(6);
    let (g, e) = (Group::Ich, Endpoint::Mortality);
    let data = prepare_problem(&c, &quick_plan(g, e)).unwrap();
    assert_eq!(data.labels.len(), 10);
    let all = prepare_problem(&c, &quick_plan(Group::All, Endpoint::Morbidity)).unwrap();
    // morbidity drops deaths by default
    assert_eq!(all.labels.len(), 20);
    let with_deaths = ExperimentPlan {
        morbidity_population: MorbidityPopulation::IncludeDeathsAsNegative,
        ..quick_plan(Group::All, Endpoint::Morbidity)
    };
    assert_eq!(prepare_problem(&c, &with_deaths).unwrap().labels.len(), 40);
    // the ALL group never scores group-specific features
    assert!(!all.candidates.iter().any(|f| f.starts_with("TOAST")));
}

fn fake_run(aucs: &[f64]) -> RunResult {
    let runs = aucs
        .iter()
        .enumerate()
        .map(|(i, &a)| FoldResult {
            repetition: 0,
            fold: i,
            n_train: 10,
            n_test: 4,
            auc: AucResult { auc: a, se: 0.0, ci_low: a, ci_high: a },
            accuracy: a,
            confusion: ConfusionMatrix { tp: 1, fp: 1, tn: 1, fn_: 1 },
            n_trees: 500 + 100 * (i % 2),
            tuning: None,
            selected: vec!["A".into(), "B".into()],
            importance: vec![
                crate::forest::FeatureImportance { feature: "A".into(), gini: 0.1, permutation: 0.3 },
                crate::forest::FeatureImportance { feature: "B".into(), gini: 0.2 * (i + 1) as f64, permutation: 0.0 },
            ],
        })
        .collect();
    RunResult {
        group: Group::All,
        endpoint: Endpoint::Mortality,
        morbidity_population: MorbidityPopulation::default(),
        problem_seed: 0,
        n_records: 14,
        n_positive: 7,
        n_negative: 7,
        exclusions: Default::default(),
        candidates: vec!["A".into(), "B".into(), "C".into()],
        runs,
        out_of_fold: OutOfFold::default(),
    }
}

#[test]
fn aggregate_examples() {
    let a = aggregate(&fake_run(&[0.9, 0.9, 0.9])).unwrap();
    assert_eq!(a.auc.mean, 0.9);
    assert_eq!(a.auc.sd, 0.0);
    assert_eq!(a.n_runs, 3);
    let a = aggregate(&fake_run(&[0.7104, 0.9837])).unwrap();
    assert_eq!((a.auc.min, a.auc.max), (0.7104, 0.9837));
    let a = aggregate(&fake_run(&[0.8])).unwrap();
    assert_eq!((a.auc.mean, a.auc.sd, a.auc.median), (0.8, 0.0, 0.8));
    assert!(aggregate(&fake_run(&[])).is_err());
}

#[test]
fn aggregate_sums_importance_and_counts() {
    let values = [0.61, 0.93, 0.77, 0.85];
    let a = aggregate(&fake_run(&values)).unwrap();
    assert_eq!(a.auc.mean, mean(&values));
    assert_eq!(a.auc_values, values);
    assert_eq!(a.gini_ranking(), vec!["B", "A"]);
    let b = &a.importance[0];
    assert!((b.gini_sum - 2.0).abs() < 1e-12);
    assert_eq!((b.times_selected, b.gini_rank, b.permutation_rank), (4, 1, 2));
    assert!((a.importance[1].permutation_sum - 1.2).abs() < 1e-12);
    assert_eq!(a.tree_counts, vec![TreeCount { n_trees: 500, runs: 2 }, TreeCount { n_trees: 600, runs: 2 }]);
    assert_eq!(a.confusion.total(), 16);
    // C was never selected
    assert_eq!(a.importance.len(), 2);
}

#[test]
fn compare_identical_vectors() {
    let x: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin()).collect();
    let r = compare_groups(&[("a".into(), x.clone()), ("b".into(), x)]).unwrap();
    assert_eq!(r.pairs.len(), 1);
    assert_eq!(r.pairs[0].p_value, 1.0);
    assert!(!r.pairs[0].reject);
}

#[test]
fn compare_shifted_vectors() {
    let mut rng = rng_from(8);
    let a: Vec<f64> = (0..1000).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
    let b: Vec<f64> = (0..1000).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal) + 1.0).collect();
    let r = compare_groups(&[("a".into(), a), ("b".into(), b)]).unwrap();
    assert!(r.pairs[0].p_value < 1e-3);
    assert_eq!(r.normality.len(), 2);
    assert!(r.pooled.shapiro_wilk.is_some());
}

#[test]
fn compare_switches_to_wilcoxon_on_skewed_data() {
    let mut rng = rng_from(9);
    let a: Vec<f64> = (0..200).map(|_| rng.gen::<f64>().powi(4)).collect();
    let b: Vec<f64> = (0..200).map(|_| rng.gen::<f64>().powi(4)).collect();
    let c: Vec<f64> = (0..200).map(|_| rng.gen::<f64>().powi(4)).collect();
    let r = compare_groups(&[("a".into(), a), ("b".into(), b), ("c".into(), c)]).unwrap();
    assert!(r.any_normality_rejected);
    assert_eq!(r.test, PairedTest::Wilcoxon);
    assert_eq!(r.pairs.len(), 3);
}

#[test]
fn compare_errors() {
    assert!(compare_groups(&[("a".into(), vec![1.0, 2.0, 3.0])]).is_err());
    let r = compare_groups(&[("a".into(), vec![1.0, 2.0, 3.0, 4.0]), ("b".into(), vec![1.0, 2.0, 3.0])]);
    assert!(matches!(r, Err(Error::LengthMismatch { .. })));
    // constant vectors skip the normality test instead of failing
    let r = compare_groups(&[("a".into(), vec![1.0; 5]), ("b".into(), vec![1.0, 2.0, 3.0, 4.0, 6.0])]).unwrap();
    assert!(r.normality[0].note.is_some());
}

fn hand_forest(tree: TreeNode, names: &[&str]) -> Forest {
    Forest {
        schema_version: FOREST_SCHEMA_VERSION,
        config: ForestConfig { n_trees: 1, ..Default::default() },
        feature_names: names.iter().map(|s| s.to_string()).collect(),
        n_train: 4,
        trees: vec![tree],
        oob: vec![vec![]],
    }
}

fn leaf(n: u64, p: u64) -> Box<TreeNode> {
    Box::new(TreeNode::Leaf { class_counts: [n, p] })
}

fn split(feature: usize, threshold: f64, left: Box<TreeNode>, right: Box<TreeNode>) -> Box<TreeNode> {
    Box::new(TreeNode::Split { feature, threshold, impurity_decrease: 0.1, n_node: 4, left, right })
}

#[test]
fn heatmap_grid_contract() {
    let c = toy_cohort(10);
    let r = run_problem(&c, &quick_plan(Group::All, Endpoint::Mortality)).unwrap();
    let plan = ExperimentPlan { candidates: Some(vec!["NIHSS48".into(), "NIHSS24".into(), "GLU0".into()]), ..quick_plan(Group::All, Endpoint::Mortality) };
    let model = fit_final_model(&c, &plan).unwrap();
    assert_eq!(model.forest.feature_names.len(), 3);
    let data = prepare_problem(&c, &plan).unwrap();
    let grid = heatmap_grid(&model.forest, &data.cohort, "NIHSS48", "NIHSS24", 50).unwrap();
    assert_eq!(grid.cells.len(), 2500);
    assert!(grid.cells.iter().all(|p| (0.0..=1.0).contains(p)));
    assert!(grid.fixed.contains_key("GLU0"));
    assert!(heatmap_grid(&model.forest, &data.cohort, "NIHSS48", "AGE", 50).is_err());
    assert!(heatmap_grid(&model.forest, &data.cohort, "NIHSS48", "NIHSS24", 1).is_err());
    assert_eq!(r.runs.len(), 2);
}

#[test]
fn heatmap_irrelevant_axis_is_flat() {
    let c = toy_cohort(11);
    let forest = hand_forest(*split(0, 12.0, leaf(3, 0), leaf(0, 3)), &["NIHSS48", "NIHSS24"]);
    let grid = heatmap_grid(&forest, &c, "NIHSS48", "NIHSS24", 20).unwrap();
    for ix in 0..20 {
        let first = grid.cell(ix, 0);
        assert!((0..20).all(|iy| grid.cell(ix, iy) == first));
    }
}

#[test]
fn heatmap_monotone_tree_is_monotone() {
    let c = toy_cohort(12);
    // increasing in both features
    let tree = split(
        0,
        10.0,
        split(1, 5.0, leaf(4, 0), leaf(3, 1)),
        split(1, 8.0, leaf(1, 3), leaf(0, 4)),
    );
    let forest = Forest {
        trees: vec![*tree.clone(), *split(1, 7.0, leaf(2, 0), leaf(0, 2))],
        oob: vec![vec![], vec![]],
        ..hand_forest(*tree, &["NIHSS48", "NIHSS24", "GLU0"])
    };
    let mut grid = heatmap_grid(&forest, &c, "NIHSS48", "NIHSS24", 30).unwrap();
    for iy in 0..30 {
        for ix in 1..30 {
            assert!(grid.cell(ix, iy) >= grid.cell(ix - 1, iy));
            assert!(iy == 0 || grid.cell(ix, iy) >= grid.cell(ix, iy - 1));
        }
    }
    let labels: Vec<bool> = c.labels().iter().map(|l| l.mortality).collect();
    annotate_misclassified(&mut grid, &forest, &c, &labels, 0.5).unwrap();
    for m in &grid.misclassified {
        assert_ne!(m.probability >= 0.5, m.label);
    }
    let csv_out = {
        let mut buf = Vec::new();
        write_heatmap_csv(&grid, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    };
    assert_eq!(csv_out.lines().count(), 1 + 900 + grid.misclassified.len());
}

#[test]
fn summary_percentages() {
    let c = toy_cohort(13);
    let s = summarize_cohort(&c).unwrap();
    assert_eq!(s.groups.len(), 3);
    let all = &s.groups[0];
    assert_eq!((all.n, all.mortality.count), (40, 20));
    assert_eq!(all.mortality.percent, 50.0);
    let is = s.groups.iter().find(|g| g.group == Group::Is).unwrap();
    let ich = s.groups.iter().find(|g| g.group == Group::Ich).unwrap();
    assert_eq!(is.n + ich.n, 40);
    let glu = all.features.iter().find(|f| f.feature == "GLU0").unwrap();
    assert_eq!(glu.n_missing, 6);
    assert!(glu.numeric.as_ref().unwrap().ks_normality.is_some());
    assert!(is.features.iter().any(|f| f.feature == "TOAST_LACUNAR"));
    assert!(!ich.features.iter().any(|f| f.feature == "TOAST_LACUNAR"));
}

#[test]
fn json_floats_have_17_digits_and_round_trip() {
    let report = Versioned::new(aggregate(&fake_run(&[0.1, 0.2, 0.7])).unwrap());
    let text = to_json_string(&report).unwrap();
    assert!(text.contains("\"schema_version\": 1"));
    assert!(text.contains("1.0000000000000001e-1"));
    let back: Versioned<AggregateReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}
