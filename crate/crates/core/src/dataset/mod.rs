//! Clinical data model: codebook, patient records, outcome labels, CSV
//! ingestion and the synthetic cohort generator.

mod codebook;
mod cohort;
mod record;
pub mod synth;

use serde::{Deserialize, Serialize};

pub use codebook::{
    FeatureCodebook, FeatureEntry, FeatureKind, Groups, ED, GLU0, LEU0, NIHSS0, NIHSS24, NIHSS48,
    SHORTLIST, T0,
};
pub use cohort::{load_cohort_csv, read_cohort_csv, Cohort, ExclusionCounts, Provenance};
pub use record::{
    abc2_volume, derive_clinical_flags, derive_outcome, ClinicalFlags, OutcomeLabel, PatientRecord,
};
pub use synth::{generate_synthetic_cohort, CohortSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrokeType {
    #[serde(rename = "IS")]
    Is,
    #[serde(rename = "ICH")]
    Ich,
}

impl StrokeType {
    pub fn as_str(self) -> &'static str {
        match self {
            StrokeType::Is => "IS",
            StrokeType::Ich => "ICH",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "IS" => Some(StrokeType::Is),
            "ICH" => Some(StrokeType::Ich),
            _ => None,
        }
    }
}

/// Patient group a prediction problem is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "ALL")]
    All,
    #[serde(rename = "IS")]
    Is,
    #[serde(rename = "ICH")]
    Ich,
}

impl Group {
    pub const EVERY: [Group; 3] = [Group::All, Group::Is, Group::Ich];

    pub fn stroke_type(self) -> Option<StrokeType> {
        match self {
            Group::All => None,
            Group::Is => Some(StrokeType::Is),
            Group::Ich => Some(StrokeType::Ich),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::All => "ALL",
            Group::Is => "IS",
            Group::Ich => "ICH",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ALL" | "IS+ICH" => Some(Group::All),
            "IS" => Some(Group::Is),
            "ICH" => Some(Group::Ich),
            _ => None,
        }
    }

    /// Whether a feature recorded for `groups` is available in this group.
    pub fn admits(self, groups: Groups) -> bool {
        match self.stroke_type() {
            None => true,
            Some(t) => groups.contains(t),
        }
    }
}

/// Prediction target at three months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Mortality,
    Morbidity,
}

impl Endpoint {
    pub const EVERY: [Endpoint; 2] = [Endpoint::Mortality, Endpoint::Morbidity];

    pub fn as_str(self) -> &'static str {
        match self {
            Endpoint::Mortality => "mortality",
            Endpoint::Morbidity => "morbidity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mortality" => Some(Endpoint::Mortality),
            "morbidity" => Some(Endpoint::Morbidity),
            _ => None,
        }
    }

    /// Binary label of a patient, or `None` when the patient is outside the
    /// endpoint's population.
    pub fn label(self, outcome: &OutcomeLabel, population: MorbidityPopulation) -> Option<bool> {
        match self {
            Endpoint::Mortality => Some(outcome.mortality),
            Endpoint::Morbidity => match population {
                MorbidityPopulation::ExcludeDeaths if outcome.mortality => None,
                _ => Some(outcome.morbidity),
            },
        }
    }
}

/// Which patients the morbidity classifier sees.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorbidityPopulation {
    /// Morbidity (mRS 3-5) against good outcome (mRS 0-2); deaths dropped.
    #[default]
    ExcludeDeaths,
    /// Deaths kept as negatives.
    IncludeDeathsAsNegative,
}
