//! Statistics checked against values frozen from scipy/statsmodels
//! (see tests/fixtures/make_fixtures.py).

use serde::Deserialize;
use stroke_rf::eval;
use stroke_rf::stats::{self, special, WilcoxonMethod};

#[derive(Deserialize)]
struct Welch {
    a: Vec<f64>,
    b: Vec<f64>,
    t: f64,
    p: f64,
    df: f64,
    student_t: f64,
    student_p: f64,
}

#[derive(Deserialize)]
struct Shapiro {
    x: Vec<f64>,
    w: f64,
    p: f64,
}

#[derive(Deserialize)]
struct WilcoxonApprox {
    a: Vec<f64>,
    b: Vec<f64>,
    p: f64,
    w_plus: f64,
    n_effective: usize,
}

#[derive(Deserialize)]
struct Lilliefors {
    x: Vec<f64>,
    d: f64,
    p: f64,
}

#[derive(Deserialize)]
struct DeLong {
    scores: Vec<f64>,
    labels: Vec<u8>,
    auc: f64,
    se: f64,
}

#[derive(Deserialize)]
struct Reference {
    delong: Vec<DeLong>,
    welch: Vec<Welch>,
    pnorm: Vec<(f64, f64)>,
    qnorm: Vec<(f64, f64)>,
    pt: Vec<(f64, f64, f64)>,
    shapiro: Vec<Shapiro>,
    wilcoxon_approx: Vec<WilcoxonApprox>,
    lilliefors: Vec<Lilliefors>,
}

fn reference() -> Reference {
    let text = include_str!("fixtures/stats_reference.json");
    serde_json::from_str(text).unwrap()
}

fn close_rel(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1e-300)
}

#[test]
fn distribution_functions() {
    let r = reference();
    for (x, want) in r.pnorm {
        let got = special::pnorm(x);
        assert!(close_rel(got, want, 1e-12), "pnorm({x}) = {got}, want {want}");
    }
    for (p, want) in r.qnorm {
        let got = special::qnorm(p);
        assert!(close_rel(got, want, 1e-12), "qnorm({p}) = {got}, want {want}");
    }
    for (t, df, want) in r.pt {
        let got = special::pt(t, df);
        assert!(close_rel(got, want, 1e-10), "pt({t}, {df}) = {got}, want {want}");
    }
}

#[test]
fn welch_and_student() {
    for case in reference().welch {
        let w = stats::welch_t(&case.a, &case.b).unwrap();
        assert!((w.t - case.t).abs() < 1e-10);
        assert!((w.df - case.df).abs() < 1e-9);
        assert!((w.p_two_sided - case.p).abs() < 1e-10);
        let s = stats::student_t(&case.a, &case.b).unwrap();
        assert!((s.t - case.student_t).abs() < 1e-10);
        assert!((s.p_two_sided - case.student_p).abs() < 1e-10);
    }
}

#[test]
fn shapiro_wilk_matches_reference() {
    let cases = reference().shapiro;
    assert_eq!(cases.len(), 20);
    for case in cases {
        let r = stats::shapiro_wilk(&case.x).unwrap();
        assert!(
            (r.statistic - case.w).abs() < 1e-6,
            "n={} W={} want {}",
            case.x.len(),
            r.statistic,
            case.w
        );
        assert!(
            (r.p_value - case.p).abs() < 1e-6 || close_rel(r.p_value, case.p, 1e-4),
            "n={} p={} want {}",
            case.x.len(),
            r.p_value,
            case.p
        );
    }
}

#[test]
fn wilcoxon_normal_approximation_matches_reference() {
    for case in reference().wilcoxon_approx {
        let r = stats::wilcoxon_signed_rank(&case.a, &case.b).unwrap();
        assert_eq!(r.method, WilcoxonMethod::NormalApproximation);
        assert_eq!(r.n_effective, case.n_effective);
        assert!((r.w_plus - case.w_plus).abs() < 1e-9);
        assert!((r.p_two_sided - case.p).abs() < 0.01, "p={} want {}", r.p_two_sided, case.p);
    }
}

#[test]
fn lilliefors_statistic_matches_reference() {
    for case in reference().lilliefors {
        let r = stats::ks_normality(&case.x).unwrap();
        assert!((r.statistic - case.d).abs() < 1e-10, "D={} want {}", r.statistic, case.d);
        // both sides use the Dallal-Wilkinson formula below 0.1
        if case.p < 0.1 {
            assert!(close_rel(r.p_value, case.p, 1e-6), "p={} want {}", r.p_value, case.p);
        } else {
            assert!(r.p_value >= 0.1 - 1e-12);
        }
    }
}

#[test]
fn delong_standard_errors() {
    let cases = reference().delong;
    assert_eq!(cases.len(), 20);
    for case in cases {
        let labels: Vec<bool> = case.labels.iter().map(|&l| l == 1).collect();
        let r = eval::auc_ci(&case.scores, &labels).unwrap();
        assert!((r.auc - case.auc).abs() < 1e-12, "auc {} vs {}", r.auc, case.auc);
        assert!((r.se - case.se).abs() < 1e-6, "se {} vs {}", r.se, case.se);
    }
}
