//! Registry schema: 65 named features with their kind, units and the stroke
//! groups they apply to.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::StrokeType;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Binary,
    Continuous,
    Ordinal,
    /// 0/1 indicator for one level of a one-hot expanded categorical variable.
    Categorical,
}

impl FeatureKind {
    /// Features stored as 0/1 (imputed by mode, parsed strictly as {0,1}).
    pub fn is_indicator(self) -> bool {
        matches!(self, FeatureKind::Binary | FeatureKind::Categorical)
    }
}

/// Stroke groups a feature is recorded for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Groups {
    pub is: bool,
    pub ich: bool,
}

impl Groups {
    pub const BOTH: Groups = Groups { is: true, ich: true };
    pub const IS_ONLY: Groups = Groups { is: true, ich: false };
    pub const ICH_ONLY: Groups = Groups { is: false, ich: true };

    pub fn contains(self, t: StrokeType) -> bool {
        match t {
            StrokeType::Is => self.is,
            StrokeType::Ich => self.ich,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureEntry {
    pub name: String,
    pub kind: FeatureKind,
    pub units: String,
    pub groups: Groups,
    /// Name of the categorical variable for one-hot levels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
}

/// The seven variables kept by the filter selection on the registry.
pub const SHORTLIST: [&str; 7] = ["NIHSS0", "NIHSS24", "NIHSS48", "T0", "ED", "LEU0", "GLU0"];

pub const NIHSS0: &str = "NIHSS0";
pub const NIHSS24: &str = "NIHSS24";
pub const NIHSS48: &str = "NIHSS48";
pub const ED: &str = "ED";
pub const T0: &str = "T0";
pub const GLU0: &str = "GLU0";
pub const LEU0: &str = "LEU0";

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureCodebook {
    entries: Vec<FeatureEntry>,
    index: HashMap<String, usize>,
}

impl Serialize for FeatureCodebook {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FeatureCodebook {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<FeatureEntry>::deserialize(d)?;
        FeatureCodebook::new(entries).map_err(serde::de::Error::custom)
    }
}

impl FeatureCodebook {
    pub fn new(entries: Vec<FeatureEntry>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.name.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate feature name `{}`", e.name)));
            }
        }
        Ok(Self { entries, index })
    }

    pub fn entries(&self) -> &[FeatureEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn entry(&self, name: &str) -> Option<&FeatureEntry> {
        self.index_of(name).map(|i| &self.entries[i])
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    /// The stroke registry schema (demographic, clinical, neuroimaging and
    /// molecular variables).
    pub fn stroke_registry() -> Self {
        use FeatureKind::*;
        let both = Groups::BOTH;
        let is = Groups::IS_ONLY;
        let ich = Groups::ICH_ONLY;
        let plain = |name: &str, kind, units: &str, groups| FeatureEntry {
            name: name.into(),
            kind,
            units: units.into(),
            groups,
            variable: None,
        };
        let level = |name: &str, variable: &str, groups| FeatureEntry {
            name: name.into(),
            kind: Categorical,
            units: "indicator".into(),
            groups,
            variable: Some(variable.into()),
        };
        let entries = vec![
            // demographic
            plain("AGE", Continuous, "years", both),
            plain("FEMALE", Binary, "indicator", both),
            plain("HYPERTENSION", Binary, "indicator", both),
            plain("DIABETES", Binary, "indicator", both),
            plain("ALCOHOL", Binary, "indicator", both),
            plain("SMOKING", Binary, "indicator", both),
            plain("DYSLIPIDEMIA", Binary, "indicator", both),
            plain("PERIPHERAL_ARTERY_DISEASE", Binary, "indicator", both),
            plain("ISCHEMIC_HEART_DISEASE", Binary, "indicator", both),
            plain("ATRIAL_FIBRILLATION", Binary, "indicator", both),
            plain("PREVIOUS_TIA", Binary, "indicator", both),
            plain("PREVIOUS_IS", Binary, "indicator", both),
            plain("PREVIOUS_ICH", Binary, "indicator", both),
            plain("PREVIOUS_ANTICOAGULANTS", Binary, "indicator", both),
            plain("PREVIOUS_ANTIPLATELETS", Binary, "indicator", both),
            // clinical / neuroimaging
            plain("WAKE_UP_STROKE", Binary, "indicator", both),
            plain("PREVIOUS_MRS", Ordinal, "mRS points", both),
            plain("ONSET_MINUTES", Continuous, "minutes", both),
            plain(NIHSS0, Ordinal, "NIHSS points", both),
            plain(NIHSS24, Ordinal, "NIHSS points", both),
            plain(NIHSS48, Ordinal, "NIHSS points", both),
            plain(ED, Binary, "indicator", both),
            level("TOAST_ATHEROTHROMBOTIC", "TOAST", is),
            level("TOAST_CARDIOEMBOLIC", "TOAST", is),
            level("TOAST_LACUNAR", "TOAST", is),
            level("TOAST_UNDETERMINED", "TOAST", is),
            level("TOAST_OTHER", "TOAST", is),
            plain("IV_FIBRINOLYSIS", Binary, "indicator", is),
            plain("THROMBECTOMY", Binary, "indicator", is),
            plain("DWI_VOLUME", Continuous, "ml", is),
            plain("CT_VOLUME_DAY4_7", Continuous, "ml", is),
            level("HT_IH1", "HEMORRHAGIC_TRANSFORMATION", is),
            level("HT_IH2", "HEMORRHAGIC_TRANSFORMATION", is),
            level("HT_PH1", "HEMORRHAGIC_TRANSFORMATION", is),
            level("HT_PH2", "HEMORRHAGIC_TRANSFORMATION", is),
            level("ICH_ETIOLOGY_HYPERTENSIVE", "ICH_ETIOLOGY", ich),
            level("ICH_ETIOLOGY_AMYLOID", "ICH_ETIOLOGY", ich),
            level("ICH_ETIOLOGY_ANTICOAGULANTS", "ICH_ETIOLOGY", ich),
            level("ICH_ETIOLOGY_OTHER", "ICH_ETIOLOGY", ich),
            plain("HEMATOMA_VOLUME_ADMISSION", Continuous, "ml", ich),
            plain("HEMATOMA_VOLUME_DAY4_7", Continuous, "ml", ich),
            plain("HEMATOMA_VOLUME_TOTAL", Continuous, "ml", ich),
            plain("HYPODENSITY_VOLUME", Continuous, "ml", ich),
            plain("HEMATOMA_GROWTH", Continuous, "ml", ich),
            level("TOPOGRAPHY_DEEP", "TOPOGRAPHY", ich),
            level("TOPOGRAPHY_LOBAR", "TOPOGRAPHY", ich),
            level("TOPOGRAPHY_CEREBELLAR", "TOPOGRAPHY", ich),
            level("TOPOGRAPHY_BRAINSTEM", "TOPOGRAPHY", ich),
            level("TOPOGRAPHY_INTRAVENTRICULAR", "TOPOGRAPHY", ich),
            plain(T0, Continuous, "°C", both),
            plain(GLU0, Continuous, "mg/dl", both),
            plain("SEDIMENTATION_RATE", Continuous, "mm", both),
            plain("HBA1C", Continuous, "%", both),
            plain("LDL", Continuous, "mg/dl", both),
            plain("HDL", Continuous, "mg/dl", both),
            plain("TRIGLYCERIDES", Continuous, "mg/dl", both),
            plain("PLATELETS", Continuous, "x10^3/ml", both),
            plain("HEMOGLOBIN", Continuous, "g/dl", both),
            plain("DBP", Continuous, "mmHg", both),
            plain("SBP", Continuous, "mmHg", both),
            // molecular markers
            plain(LEU0, Continuous, "x10^3/ml", both),
            plain("FIBRINOGEN", Continuous, "mg/dl", both),
            plain("CRP", Continuous, "mg/dl", both),
            plain("MICROALBUMINURIA", Continuous, "mg/24h", both),
            plain("NT_PROBNP", Continuous, "pg/ml", both),
        ];
        Self::new(entries).expect("registry codebook names are unique")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_65_unique_features() {
        let cb = FeatureCodebook::stroke_registry();
        assert_eq!(cb.len(), 65);
        for name in SHORTLIST {
            assert!(cb.index_of(name).is_some(), "{name} missing");
        }
    }

    #[test]
    fn group_restrictions() {
        let cb = FeatureCodebook::stroke_registry();
        assert_eq!(cb.entry("TOAST_LACUNAR").unwrap().groups, Groups::IS_ONLY);
        assert_eq!(cb.entry("HEMATOMA_VOLUME_ADMISSION").unwrap().groups, Groups::ICH_ONLY);
        assert_eq!(cb.entry("NIHSS48").unwrap().groups, Groups::BOTH);
    }

    #[test]
    fn duplicate_names_rejected() {
        let e = FeatureCodebook::stroke_registry().entries()[0].clone();
        assert!(FeatureCodebook::new(vec![e.clone(), e]).is_err());
    }

    #[test]
    fn json_round_trip_keeps_index() {
        let cb = FeatureCodebook::stroke_registry();
        let back: FeatureCodebook = serde_json::from_str(&serde_json::to_string(&cb).unwrap()).unwrap();
        assert_eq!(back, cb);
        assert_eq!(back.index_of("GLU0"), cb.index_of("GLU0"));
    }
}
