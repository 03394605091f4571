//! Registry-calibrated default generator parameters.

use std::collections::BTreeMap;

use super::{
    CohortSpec, ContinuousSpec, GroupSpec, GroupSpecs, LinkTerm, NihssSpec, NihssTargets,
    OutcomeTargets, Quartiles, Shape, SignalSpec, TrajectoryStep,
};

/// Published morbidity percentages (33.4 % IS, 27.6 % ICH) mix to 32.3 %,
/// below the 35.0 % reported for the whole cohort. Both group targets are
/// scaled by this factor so that the mixture reproduces the overall figure.
pub const MORBIDITY_RECONCILIATION: f64 = 0.350 / (0.818 * 0.334 + 0.182 * 0.276);

fn pct(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), v / 100.0)).collect()
}

fn normal(mean: f64, sd: f64, lower: f64, upper: f64) -> ContinuousSpec {
    ContinuousSpec {
        mean,
        sd,
        shape: Shape::Normal,
        lower: Some(lower),
        upper: Some(upper),
        missing_fraction: 0.0,
    }
}

fn lognormal(mean: f64, sd: f64) -> ContinuousSpec {
    ContinuousSpec {
        mean,
        sd,
        shape: Shape::LogNormal,
        lower: Some(0.0),
        upper: None,
        missing_fraction: 0.0,
    }
}

fn with_missing(mut c: ContinuousSpec, fraction: f64) -> ContinuousSpec {
    c.missing_fraction = fraction;
    c
}

fn quartiles(median: f64, q1: f64, q3: f64) -> Quartiles {
    Quartiles { median, q1, q3 }
}

fn step(log_ratio_mean: f64, log_ratio_sd: f64, noise_sd: f64) -> TrajectoryStep {
    TrajectoryStep {
        log_ratio_mean,
        log_ratio_sd,
        noise_sd,
    }
}

/// Continuous features present in both groups.
fn shared_continuous(is: bool) -> BTreeMap<String, ContinuousSpec> {
    let pick = |a: (f64, f64), b: (f64, f64)| if is { a } else { b };
    let mut m = BTreeMap::new();
    let mut put = |name: &str, c: ContinuousSpec| {
        m.insert(name.to_string(), c);
    };
    let (mu, sd) = pick((71.9, 13.8), (73.3, 13.1));
    put("AGE", normal(mu, sd, 18.0, 105.0));
    let (mu, sd) = pick((240.8, 167.4), (231.3, 206.1));
    put("ONSET_MINUTES", lognormal(mu, sd));
    let (mu, sd) = pick((36.4, 0.7), (36.6, 0.8));
    put("T0", normal(mu, sd, 30.0, 43.0));
    let (mu, sd) = pick((137.3, 57.9), (138.9, 48.1));
    put("GLU0", lognormal(mu, sd));
    let (mu, sd) = pick((26.5, 23.1), (26.2, 23.1));
    put("SEDIMENTATION_RATE", with_missing(lognormal(mu, sd), 0.05));
    let (mu, sd) = pick((6.1, 2.3), (5.8, 0.9));
    put("HBA1C", with_missing(lognormal(mu, sd), 0.10));
    let (mu, sd) = pick((112.5, 44.4), (109.6, 35.2));
    put("LDL", with_missing(lognormal(mu, sd), 0.05));
    let (mu, sd) = pick((41.8, 18.5), (38.8, 18.3));
    put("HDL", with_missing(lognormal(mu, sd), 0.05));
    let (mu, sd) = pick((121.2, 65.1), (109.4, 50.7));
    put("TRIGLYCERIDES", with_missing(lognormal(mu, sd), 0.05));
    let (mu, sd) = pick((217.7, 83.7), (203.3, 77.9));
    put("PLATELETS", lognormal(mu, sd));
    let (mu, sd) = pick((13.8, 1.9), (13.5, 2.1));
    put("HEMOGLOBIN", normal(mu, sd, 5.0, 22.0));
    let (mu, sd) = pick((81.5, 15.8), (84.3, 17.2));
    put("DBP", normal(mu, sd, 30.0, 160.0));
    let (mu, sd) = pick((152.5, 27.3), (155.5, 27.4));
    put("SBP", normal(mu, sd, 60.0, 280.0));
    let (mu, sd) = pick((9.1, 3.2), (8.8, 3.3));
    put("LEU0", lognormal(mu, sd));
    let (mu, sd) = pick((444.5, 101.8), (444.1, 101.5));
    put("FIBRINOGEN", normal(mu, sd, 100.0, 1200.0));
    let (mu, sd) = pick((3.6, 4.2), (5.2, 5.2));
    put("CRP", with_missing(lognormal(mu, sd), 0.05));
    let (mu, sd) = pick((5.9, 25.9), (16.7, 30.0));
    put("MICROALBUMINURIA", with_missing(lognormal(mu, sd), 0.15));
    let (mu, sd) = pick((1581.2, 1886.1), (1013.8, 3620.2));
    put("NT_PROBNP", with_missing(lognormal(mu, sd), 0.20));
    m
}

fn is_group() -> GroupSpec {
    let binary = pct(&[
        ("FEMALE", 44.8),
        ("HYPERTENSION", 63.7),
        ("DIABETES", 24.1),
        ("ALCOHOL", 11.5),
        ("SMOKING", 16.4),
        ("DYSLIPIDEMIA", 35.1),
        ("PERIPHERAL_ARTERY_DISEASE", 5.9),
        ("ISCHEMIC_HEART_DISEASE", 11.3),
        ("ATRIAL_FIBRILLATION", 24.1),
        ("PREVIOUS_TIA", 6.1),
        ("PREVIOUS_IS", 13.6),
        ("PREVIOUS_ICH", 0.9),
        ("PREVIOUS_ANTICOAGULANTS", 8.5),
        ("PREVIOUS_ANTIPLATELETS", 24.4),
        ("WAKE_UP_STROKE", 9.1),
        ("IV_FIBRINOLYSIS", 22.7),
        ("THROMBECTOMY", 5.2),
    ]);
    let mut categorical = BTreeMap::new();
    categorical.insert(
        "TOAST".to_string(),
        pct(&[
            ("TOAST_ATHEROTHROMBOTIC", 22.9),
            ("TOAST_CARDIOEMBOLIC", 36.3),
            ("TOAST_LACUNAR", 8.7),
            ("TOAST_UNDETERMINED", 30.9),
            ("TOAST_OTHER", 1.2),
        ]),
    );
    categorical.insert(
        "HEMORRHAGIC_TRANSFORMATION".to_string(),
        pct(&[("HT_IH1", 7.0), ("HT_IH2", 3.1), ("HT_PH1", 1.7), ("HT_PH2", 1.2)]),
    );
    let mut continuous = shared_continuous(true);
    continuous.insert("DWI_VOLUME".into(), lognormal(33.3, 76.9));
    continuous.insert("CT_VOLUME_DAY4_7".into(), lognormal(51.1, 82.3));
    let mut ordinal = BTreeMap::new();
    ordinal.insert("PREVIOUS_MRS".to_string(), vec![0.60, 0.20, 0.10, 0.06, 0.04]);
    GroupSpec {
        binary,
        categorical,
        continuous,
        ordinal,
        nihss: NihssSpec {
            admission_mean: 13.133,
            admission_sd: 8.726,
            to_24h: step(-0.456, 0.351, 0.761),
            to_48h: step(-0.074, 0.314, 1.160),
            targets: NihssTargets {
                admission: quartiles(13.0, 8.0, 19.0),
                at_24h: quartiles(7.0, 3.0, 15.0),
                at_48h: quartiles(6.0, 2.0, 14.0),
                early_deterioration: 0.058,
            },
        },
        outcome: OutcomeTargets {
            poor_outcome: 0.475,
            morbidity: 0.334 * MORBIDITY_RECONCILIATION,
            mortality: 0.132,
        },
    }
}

fn ich_group() -> GroupSpec {
    let binary = pct(&[
        ("FEMALE", 41.5),
        ("HYPERTENSION", 60.7),
        ("DIABETES", 20.4),
        ("ALCOHOL", 15.4),
        ("SMOKING", 10.7),
        ("DYSLIPIDEMIA", 36.7),
        ("PERIPHERAL_ARTERY_DISEASE", 4.6),
        ("ISCHEMIC_HEART_DISEASE", 8.6),
        ("ATRIAL_FIBRILLATION", 18.1),
        ("PREVIOUS_TIA", 2.5),
        ("PREVIOUS_IS", 9.8),
        ("PREVIOUS_ICH", 9.8),
        ("PREVIOUS_ANTICOAGULANTS", 14.1),
        ("PREVIOUS_ANTIPLATELETS", 16.5),
        ("WAKE_UP_STROKE", 4.6),
    ]);
    let mut categorical = BTreeMap::new();
    categorical.insert(
        "ICH_ETIOLOGY".to_string(),
        pct(&[
            ("ICH_ETIOLOGY_HYPERTENSIVE", 46.0),
            ("ICH_ETIOLOGY_AMYLOID", 10.4),
            ("ICH_ETIOLOGY_ANTICOAGULANTS", 14.2),
            ("ICH_ETIOLOGY_OTHER", 29.4),
        ]),
    );
    categorical.insert(
        "TOPOGRAPHY".to_string(),
        pct(&[
            ("TOPOGRAPHY_DEEP", 50.0),
            ("TOPOGRAPHY_LOBAR", 39.6),
            ("TOPOGRAPHY_CEREBELLAR", 4.7),
            ("TOPOGRAPHY_BRAINSTEM", 3.8),
            ("TOPOGRAPHY_INTRAVENTRICULAR", 1.9),
        ]),
    );
    let mut continuous = shared_continuous(false);
    continuous.insert("HEMATOMA_VOLUME_ADMISSION".into(), lognormal(40.3, 46.2));
    continuous.insert("HEMATOMA_VOLUME_DAY4_7".into(), lognormal(51.9, 48.1));
    continuous.insert("HEMATOMA_VOLUME_TOTAL".into(), lognormal(68.3, 53.1));
    continuous.insert("HYPODENSITY_VOLUME".into(), lognormal(15.2, 17.9));
    continuous.insert("HEMATOMA_GROWTH".into(), normal(11.9, 27.6, -20.0, 200.0));
    let mut ordinal = BTreeMap::new();
    ordinal.insert("PREVIOUS_MRS".to_string(), vec![0.45, 0.35, 0.11, 0.06, 0.03]);
    GroupSpec {
        binary,
        categorical,
        continuous,
        ordinal,
        nihss: NihssSpec {
            admission_mean: 12.642,
            admission_sd: 8.617,
            to_24h: step(-0.047, 0.12, 1.031),
            to_48h: step(0.0, 0.207, 2.07),
            targets: NihssTargets {
                admission: quartiles(13.0, 7.0, 18.0),
                at_24h: quartiles(12.0, 6.0, 19.0),
                at_48h: quartiles(12.0, 4.0, 20.0),
                early_deterioration: 0.165,
            },
        },
        outcome: OutcomeTargets {
            poor_outcome: 0.586,
            morbidity: 0.276 * MORBIDITY_RECONCILIATION,
            mortality: 0.302,
        },
    }
}

fn term(feature: &str, center: f64, scale: f64, weight: f64) -> LinkTerm {
    LinkTerm {
        feature: feature.into(),
        center,
        scale,
        weight,
    }
}

pub(super) fn signal() -> SignalSpec {
    SignalSpec {
        mortality: vec![
            term("NIHSS48", 8.0, 8.0, 1.9),
            term("NIHSS24", 9.0, 8.0, 0.9),
            term("NIHSS0", 13.0, 9.0, 0.15),
            term("T0", 36.5, 0.7, 0.35),
            term("ED", 0.0, 1.0, 0.5),
            term("LEU0", 9.0, 3.2, 0.35),
            term("GLU0", 138.0, 55.0, 0.35),
        ],
        morbidity: vec![
            term("NIHSS48", 8.0, 8.0, 0.9),
            term("NIHSS24", 9.0, 8.0, 0.6),
            term("NIHSS0", 13.0, 9.0, 0.15),
            term("T0", 36.5, 0.7, 0.15),
            term("ED", 0.0, 1.0, 0.4),
            term("LEU0", 9.0, 3.2, 0.15),
            term("GLU0", 138.0, 55.0, 0.3),
        ],
    }
}

pub(super) fn registry() -> CohortSpec {
    CohortSpec {
        n_total: 6022,
        is_fraction: 0.818,
        early_death_fraction: 0.0,
        lost_followup_fraction: 0.0,
        groups: GroupSpecs {
            is: is_group(),
            ich: ich_group(),
        },
        signal: signal(),
        good_mrs_pmf: [0.30, 0.38, 0.32],
        morbid_mrs_pmf: [0.45, 0.35, 0.20],
    }
}
