use serde::{Deserialize, Serialize};

use super::codebook::{FeatureCodebook, GLU0, LEU0, NIHSS0, NIHSS24, NIHSS48, T0};
use super::StrokeType;
use crate::error::{Error, Result};

pub const NIHSS_MAX: f64 = 42.0;
pub const MRS_MAX: u8 = 6;
pub const TEMPERATURE_RANGE: (f64, f64) = (30.0, 43.0);

/// One patient: feature values aligned with the codebook (`None` = missing)
/// plus the administrative fields that drive labels and exclusions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatientRecord {
    pub values: Vec<Option<f64>>,
    pub stroke_type: StrokeType,
    pub mrs_3m: u8,
    pub died_first_24h: bool,
    pub lost_followup: bool,
}

impl PatientRecord {
    pub fn value(&self, codebook: &FeatureCodebook, name: &str) -> Option<f64> {
        codebook.index_of(name).and_then(|i| self.values[i])
    }

    pub fn nihss(&self, codebook: &FeatureCodebook) -> (Option<f64>, Option<f64>, Option<f64>) {
        (
            self.value(codebook, NIHSS0),
            self.value(codebook, NIHSS24),
            self.value(codebook, NIHSS48),
        )
    }

    /// Checks the clinical ranges: mRS in [0,6], NIHSS in [0,42], admission
    /// temperature in [30,43] °C, indicators in {0,1} and nonnegative labs.
    pub fn validate(&self, codebook: &FeatureCodebook) -> Result<()> {
        if self.values.len() != codebook.len() {
            return Err(Error::LengthMismatch {
                left: self.values.len(),
                right: codebook.len(),
            });
        }
        if self.mrs_3m > MRS_MAX {
            return Err(Error::OutOfRange {
                field: "mrs_3m".into(),
                value: self.mrs_3m as f64,
                range: "[0, 6]",
            });
        }
        for (entry, value) in codebook.entries().iter().zip(&self.values) {
            let Some(v) = *value else { continue };
            let out = |range| Error::OutOfRange {
                field: entry.name.clone(),
                value: v,
                range,
            };
            if !v.is_finite() {
                return Err(out("finite values"));
            }
            match entry.name.as_str() {
                NIHSS0 | NIHSS24 | NIHSS48 if !(0.0..=NIHSS_MAX).contains(&v) => {
                    return Err(out("[0, 42]"))
                }
                T0 if !(TEMPERATURE_RANGE.0..=TEMPERATURE_RANGE.1).contains(&v) => {
                    return Err(out("[30, 43]"))
                }
                GLU0 | LEU0 if v < 0.0 => return Err(out("[0, inf)")),
                _ => {}
            }
            if entry.kind.is_indicator() && v != 0.0 && v != 1.0 {
                return Err(out("{0, 1}"));
            }
        }
        Ok(())
    }
}

/// Functional outcome at three months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeLabel {
    pub poor_outcome: bool,
    pub morbidity: bool,
    pub mortality: bool,
}

/// Poor outcome is mRS > 2, morbidity 3 ≤ mRS ≤ 5 and mortality mRS = 6.
pub fn derive_outcome(mrs_3m: u8) -> Result<OutcomeLabel> {
    if mrs_3m > MRS_MAX {
        return Err(Error::OutOfRange {
            field: "mrs_3m".into(),
            value: mrs_3m as f64,
            range: "[0, 6]",
        });
    }
    Ok(OutcomeLabel {
        poor_outcome: mrs_3m > 2,
        morbidity: (3..=5).contains(&mrs_3m),
        mortality: mrs_3m == 6,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClinicalFlags {
    /// NIHSS rose by at least 4 points within 48 h of admission.
    pub early_deterioration: bool,
    /// NIHSS at 24 h is at most 8.
    pub effective_reperfusion: bool,
}

pub fn derive_clinical_flags(nihss0: u8, nihss24: u8, nihss48: u8) -> Result<ClinicalFlags> {
    for (field, v) in [("NIHSS0", nihss0), ("NIHSS24", nihss24), ("NIHSS48", nihss48)] {
        if v as f64 > NIHSS_MAX {
            return Err(Error::OutOfRange {
                field: field.into(),
                value: v as f64,
                range: "[0, 42]",
            });
        }
    }
    let worst = nihss24.max(nihss48) as i32;
    Ok(ClinicalFlags {
        early_deterioration: worst - nihss0 as i32 >= 4,
        effective_reperfusion: nihss24 <= 8,
    })
}

/// Hematoma volume (ml) from three orthogonal diameters in cm.
pub fn abc2_volume(a: f64, b: f64, c: f64) -> Result<f64> {
    for (field, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v >= 0.0) {
            return Err(Error::OutOfRange {
                field: field.into(),
                value: v,
                range: "[0, inf)",
            });
        }
    }
    Ok(a * b * c / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn outcome_examples() {
        let o = |m| derive_outcome(m).unwrap();
        assert_eq!(
            o(6),
            OutcomeLabel { poor_outcome: true, morbidity: false, mortality: true }
        );
        assert_eq!(
            o(2),
            OutcomeLabel { poor_outcome: false, morbidity: false, mortality: false }
        );
        assert_eq!(
            o(4),
            OutcomeLabel { poor_outcome: true, morbidity: true, mortality: false }
        );
        assert!(derive_outcome(7).is_err());
    }

    #[test]
    fn outcome_partitions_the_scale() {
        for m in 0..=6 {
            let l = derive_outcome(m).unwrap();
            let good = !l.poor_outcome;
            assert_eq!([good, l.morbidity, l.mortality].iter().filter(|x| **x).count(), 1);
            assert!(!l.mortality || l.poor_outcome);
            assert!(!l.morbidity || l.poor_outcome);
        }
    }

    #[test]
    fn clinical_flag_examples() {
        let f = derive_clinical_flags(10, 11, 15).unwrap();
        assert!(f.early_deterioration && !f.effective_reperfusion);
        let f = derive_clinical_flags(10, 8, 10).unwrap();
        assert!(!f.early_deterioration && f.effective_reperfusion);
        let f = derive_clinical_flags(0, 0, 0).unwrap();
        assert!(!f.early_deterioration && f.effective_reperfusion);
        assert!(derive_clinical_flags(43, 0, 0).is_err());
    }

    #[test]
    fn abc2_examples() {
        assert_eq!(abc2_volume(4.0, 3.0, 2.0).unwrap(), 12.0);
        assert_eq!(abc2_volume(0.0, 5.0, 5.0).unwrap(), 0.0);
        assert_eq!(abc2_volume(5.0, 4.0, 4.0).unwrap(), 40.0);
        assert!(abc2_volume(-1.0, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn abc2_symmetric(a in 0.0f64..20.0, b in 0.0f64..20.0, c in 0.0f64..20.0) {
            let v = abc2_volume(a, b, c).unwrap();
            for p in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                let w = abc2_volume(p.0, p.1, p.2).unwrap();
                prop_assert!((v - w).abs() <= 1e-12 * v.max(1.0));
            }
        }
    }
}
