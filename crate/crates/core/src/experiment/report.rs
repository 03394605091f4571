use std::io::{self, Write};
use std::path::Path;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::aggregate::{aggregate, AggregateReport};
use super::plan::ExperimentPlan;
use super::run::{FoldResult, RunResult};
use crate::dataset::{Endpoint, ExclusionCounts, Group};
use crate::error::{Error, Result};
use crate::eval::{auc_ci, roc_curve, write_roc_csv, AucResult};
pub use crate::format::fmt17;

/// Version stamped on every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

/// Pretty JSON whose floats are written by [`fmt17`].
struct Fixed17(PrettyFormatter<'static>);

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt17(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// An artifact body with the top-level `schema_version` field.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct Versioned<T> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Versioned<T> {
    pub fn new(body: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            body,
        }
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json_string(value)?).map_err(|e| Error::io(path, e))
}

/// Reads a versioned artifact, rejecting other schema versions.
pub fn read_versioned<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let v: Versioned<T> = serde_json::from_str(&text)?;
    if v.schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "{}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
            path.display(),
            v.schema_version
        )));
    }
    Ok(v.body)
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ProblemReport {
    pub group: Group,
    pub endpoint: Endpoint,
    pub plan: ExperimentPlan,
    pub problem_seed: u64,
    pub n_records: usize,
    pub n_positive: usize,
    pub n_negative: usize,
    pub exclusions: ExclusionCounts,
    pub n_candidates: usize,
    /// DeLong interval over the first repetition's out-of-fold scores.
    pub out_of_fold_auc: AucResult,
    pub aggregate: AggregateReport,
    pub runs: Vec<FoldResult>,
}

impl ProblemReport {
    pub fn new(plan: &ExperimentPlan, result: &RunResult) -> Result<Self> {
        Ok(Self {
            group: result.group,
            endpoint: result.endpoint,
            plan: plan.clone(),
            problem_seed: result.problem_seed,
            n_records: result.n_records,
            n_positive: result.n_positive,
            n_negative: result.n_negative,
            exclusions: result.exclusions,
            n_candidates: result.candidates.len(),
            out_of_fold_auc: auc_ci(&result.out_of_fold.scores, &result.out_of_fold.labels)?,
            aggregate: aggregate(result)?,
            runs: result.runs.clone(),
        })
    }

    pub fn key(&self) -> String {
        problem_key(self.group, self.endpoint)
    }
}

pub fn problem_key(group: Group, endpoint: Endpoint) -> String {
    format!("{}_{}", group.as_str().to_ascii_lowercase(), endpoint.as_str())
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct RunReport {
    pub master_seed: u64,
    pub problems: Vec<ProblemReport>,
}

impl RunReport {
    pub fn problem(&self, group: Group, endpoint: Endpoint) -> Option<&ProblemReport> {
        self.problems.iter().find(|p| p.group == group && p.endpoint == endpoint)
    }
}

/// Summed importances of every problem, one row per (problem, feature).
pub fn write_importance_csv<W: Write>(problems: &[ProblemReport], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "group",
        "endpoint",
        "feature",
        "gini_sum",
        "permutation_sum",
        "times_selected",
        "gini_rank",
        "permutation_rank",
    ])?;
    for p in problems {
        for imp in &p.aggregate.importance {
            w.write_record([
                p.group.as_str(),
                p.endpoint.as_str(),
                &imp.feature,
                &fmt17(imp.gini_sum),
                &fmt17(imp.permutation_sum),
                &imp.times_selected.to_string(),
                &imp.gini_rank.to_string(),
                &imp.permutation_rank.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io("importance csv", e))?;
    Ok(())
}

/// ROC curve of the first repetition's out-of-fold scores.
pub fn write_out_of_fold_roc<W: Write>(result: &RunResult, writer: W) -> Result<()> {
    let curve = roc_curve(&result.out_of_fold.scores, &result.out_of_fold.labels)?;
    write_roc_csv(&curve, writer)
}
