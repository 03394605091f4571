use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::codebook::FeatureCodebook;
use super::record::{derive_outcome, OutcomeLabel, PatientRecord};
use super::{Group, StrokeType};
use crate::error::{Error, Result};

pub const MRS_COLUMN: &str = "mrs_3m";
pub const STROKE_TYPE_COLUMN: &str = "stroke_type";
pub const DIED_24H_COLUMN: &str = "died_first_24h";
pub const LOST_COLUMN: &str = "lost_followup";
const META_COLUMNS: [&str; 4] = [MRS_COLUMN, STROKE_TYPE_COLUMN, DIED_24H_COLUMN, LOST_COLUMN];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    LoadedFromFile { path: String },
    Synthetic { seed: u64 },
}

/// Patients with their derived outcome labels. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    codebook: Arc<FeatureCodebook>,
    records: Vec<PatientRecord>,
    labels: Vec<OutcomeLabel>,
    provenance: Provenance,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionCounts {
    pub died_first_24h: usize,
    /// Lost to follow-up and not already excluded for early death.
    pub lost_followup: usize,
}

impl ExclusionCounts {
    pub fn total(&self) -> usize {
        self.died_first_24h + self.lost_followup
    }
}

impl Cohort {
    /// Validates every record and derives its outcome label.
    pub fn new(
        codebook: Arc<FeatureCodebook>,
        records: Vec<PatientRecord>,
        provenance: Provenance,
    ) -> Result<Self> {
        let labels = records
            .iter()
            .map(|r| {
                r.validate(&codebook)?;
                derive_outcome(r.mrs_3m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            codebook,
            records,
            labels,
            provenance,
        })
    }

    pub(crate) fn with_records(&self, records: Vec<PatientRecord>) -> Self {
        let labels = records
            .iter()
            .map(|r| derive_outcome(r.mrs_3m).expect("validated on construction"))
            .collect();
        Self {
            codebook: Arc::clone(&self.codebook),
            records,
            labels,
            provenance: self.provenance.clone(),
        }
    }

    pub fn codebook(&self) -> &FeatureCodebook {
        &self.codebook
    }

    pub fn shared_codebook(&self) -> Arc<FeatureCodebook> {
        Arc::clone(&self.codebook)
    }

    pub fn records(&self) -> &[PatientRecord] {
        &self.records
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.labels
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count_type(&self, t: StrokeType) -> usize {
        self.records.iter().filter(|r| r.stroke_type == t).count()
    }

    /// Non-missing values of one feature, in record order.
    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let i = self.codebook.require(name)?;
        Ok(self.records.iter().map(|r| r.values[i]).collect())
    }

    /// Subset by record indices, preserving the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        self.with_records(indices.iter().map(|&i| self.records[i].clone()).collect())
    }

    /// Drops patients who died within 24 h or were lost to follow-up.
    pub fn apply_exclusions(&self) -> (Cohort, ExclusionCounts) {
        let mut counts = ExclusionCounts::default();
        let kept = self
            .records
            .iter()
            .filter(|r| {
                if r.died_first_24h {
                    counts.died_first_24h += 1;
                    false
                } else if r.lost_followup {
                    counts.lost_followup += 1;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (self.with_records(kept), counts)
    }

    /// Keeps one stroke group; features not recorded for that group become
    /// missing. `Group::All` is the identity.
    pub fn filter_group(&self, group: Group) -> Cohort {
        let Some(t) = group.stroke_type() else {
            return self.clone();
        };
        let inapplicable: Vec<usize> = self
            .codebook
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.groups.contains(t))
            .map(|(i, _)| i)
            .collect();
        let kept = self
            .records
            .iter()
            .filter(|r| r.stroke_type == t)
            .map(|r| {
                let mut r = r.clone();
                for &i in &inapplicable {
                    r.values[i] = None;
                }
                r
            })
            .collect();
        self.with_records(kept)
    }

    /// Writes the cohort in the registry CSV layout.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(file)
    }

    pub fn write_csv_to<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let header: Vec<&str> = self.codebook.names().chain(META_COLUMNS).collect();
        w.write_record(&header)?;
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        for r in &self.records {
            row.clear();
            row.extend(r.values.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
            row.push(r.mrs_3m.to_string());
            row.push(r.stroke_type.as_str().to_string());
            row.push((r.died_first_24h as u8).to_string());
            row.push((r.lost_followup as u8).to_string());
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}

/// Reads a registry CSV. Codebook features absent from the header are
/// treated as entirely missing; empty cells are missing.
pub fn load_cohort_csv(path: &Path, codebook: Arc<FeatureCodebook>) -> Result<Cohort> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let provenance = Provenance::LoadedFromFile {
        path: path.display().to_string(),
    };
    read_cohort_csv(file, codebook, provenance)
}

pub fn read_cohort_csv<R: std::io::Read>(
    reader: R,
    codebook: Arc<FeatureCodebook>,
    provenance: Provenance,
) -> Result<Cohort> {
    enum Slot {
        Feature(usize),
        Mrs,
        StrokeType,
        Died,
        Lost,
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    let mut slots = Vec::with_capacity(header.len());
    for name in header.iter() {
        let name = name.trim();
        slots.push(match name {
            MRS_COLUMN => Slot::Mrs,
            STROKE_TYPE_COLUMN => Slot::StrokeType,
            DIED_24H_COLUMN => Slot::Died,
            LOST_COLUMN => Slot::Lost,
            _ => Slot::Feature(
                codebook
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownColumn(name.to_string()))?,
            ),
        });
    }
    for required in META_COLUMNS {
        if !header.iter().any(|h| h.trim() == required) {
            return Err(Error::MissingColumn(required.to_string()));
        }
    }

    let mut records = Vec::new();
    for result in rdr.records() {
        let row = result?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let parse_err = |col: &str, value: &str, reason: &str| Error::Parse {
            row: line,
            column: col.to_string(),
            value: value.to_string(),
            reason: reason.to_string(),
        };
        let flag = |col: &str, cell: &str| match cell {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(parse_err(col, cell, "expected 0 or 1")),
        };
        let mut values = vec![None; codebook.len()];
        let mut mrs = None;
        let mut stroke_type = None;
        let mut died = false;
        let mut lost = false;
        for ((slot, col), cell) in slots.iter().zip(header.iter()).zip(row.iter()) {
            let cell = cell.trim();
            match slot {
                Slot::Feature(i) => {
                    if cell.is_empty() {
                        continue;
                    }
                    let kind = codebook.entries()[*i].kind;
                    let v = if kind.is_indicator() {
                        flag(col, cell)? as u8 as f64
                    } else {
                        cell.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| parse_err(col, cell, "not a number"))?
                    };
                    values[*i] = Some(v);
                }
                Slot::Mrs => {
                    let m: u8 = cell
                        .parse()
                        .map_err(|_| parse_err(col, cell, "expected an integer mRS"))?;
                    if m > 6 {
                        return Err(Error::OutOfRange {
                            field: format!("{MRS_COLUMN} (row {line})"),
                            value: m as f64,
                            range: "[0, 6]",
                        });
                    }
                    mrs = Some(m);
                }
                Slot::StrokeType => {
                    stroke_type = Some(
                        StrokeType::parse(cell)
                            .ok_or_else(|| parse_err(col, cell, "expected IS or ICH"))?,
                    )
                }
                Slot::Died => died = flag(col, cell)?,
                Slot::Lost => lost = flag(col, cell)?,
            }
        }
        records.push(PatientRecord {
            values,
            stroke_type: stroke_type.ok_or_else(|| parse_err(STROKE_TYPE_COLUMN, "", "empty"))?,
            mrs_3m: mrs.ok_or_else(|| parse_err(MRS_COLUMN, "", "empty"))?,
            died_first_24h: died,
            lost_followup: lost,
        });
    }
    Cohort::new(codebook, records, provenance)
}
