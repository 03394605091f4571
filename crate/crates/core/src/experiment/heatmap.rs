use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::{Cohort, Endpoint};
use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::forest::Forest;
use crate::stats::quantile_sorted;

/// A record whose thresholded prediction disagrees with its label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisclassifiedRecord {
    pub record: usize,
    pub x: f64,
    pub y: f64,
    pub label: bool,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapGrid {
    pub x_feature: String,
    pub y_feature: String,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// Row-major over y: `cells[iy * x_values.len() + ix]`.
    pub cells: Vec<f64>,
    /// Values held for every other forest feature.
    pub fixed: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<Endpoint>,
    pub misclassified: Vec<MisclassifiedRecord>,
}

impl HeatmapGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> f64 {
        self.cells[iy * self.x_values.len() + ix]
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Median of the present values, or the mode (0 on a tie) for indicators.
fn typical_value(cohort: &Cohort, name: &str) -> Result<f64> {
    let entry = cohort
        .codebook()
        .entry(name)
        .ok_or_else(|| Error::UnknownFeature(name.to_string()))?;
    let mut v: Vec<f64> = cohort.column(name)?.into_iter().flatten().collect();
    if v.is_empty() {
        return Err(Error::InsufficientData(format!("{name} has no recorded value")));
    }
    Ok(if entry.kind.is_indicator() {
        let ones = v.iter().filter(|&&x| x == 1.0).count();
        if 2 * ones > v.len() { 1.0 } else { 0.0 }
    } else {
        v.sort_by(f64::total_cmp);
        quantile_sorted(&v, 0.5)
    })
}

fn observed_range(cohort: &Cohort, name: &str) -> Result<(f64, f64)> {
    let v: Vec<f64> = cohort.column(name)?.into_iter().flatten().collect();
    if v.is_empty() {
        return Err(Error::InsufficientData(format!("{name} has no recorded value")));
    }
    Ok(v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x))))
}

/// Forest probability over a `resolution × resolution` grid spanning the
/// observed ranges of two features, the rest held at cohort medians
/// (modes for indicators).
pub fn heatmap_grid(
    forest: &Forest,
    cohort: &Cohort,
    x_feature: &str,
    y_feature: &str,
    resolution: usize,
) -> Result<HeatmapGrid> {
    if resolution < 2 {
        return Err(Error::Config("heatmap resolution must be at least 2".into()));
    }
    let position = |name: &str| {
        forest
            .feature_names
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| Error::UnknownFeature(format!("{name} is not a feature of the forest")))
    };
    let (jx, jy) = (position(x_feature)?, position(y_feature)?);
    if jx == jy {
        return Err(Error::Config("heatmap axes must be two different features".into()));
    }
    let mut fixed = BTreeMap::new();
    let mut row = vec![0.0; forest.feature_names.len()];
    for (j, name) in forest.feature_names.iter().enumerate() {
        if j != jx && j != jy {
            let v = typical_value(cohort, name)?;
            fixed.insert(name.clone(), v);
            row[j] = v;
        }
    }
    let (x0, x1) = observed_range(cohort, x_feature)?;
    let (y0, y1) = observed_range(cohort, y_feature)?;
    let x_values = linspace(x0, x1, resolution);
    let y_values = linspace(y0, y1, resolution);
    let mut cells = Vec::with_capacity(resolution * resolution);
    for &y in &y_values {
        row[jy] = y;
        for &x in &x_values {
            row[jx] = x;
            cells.push(forest.predict_proba(&row));
        }
    }
    Ok(HeatmapGrid {
        x_feature: x_feature.to_string(),
        y_feature: y_feature.to_string(),
        x_values,
        y_values,
        cells,
        fixed,
        endpoint: None,
        misclassified: Vec::new(),
    })
}

/// Records of `cohort` whose prediction at `threshold` disagrees
/// with `labels`. Missing values take the grid's fixed values.
pub fn annotate_misclassified(
    grid: &mut HeatmapGrid,
    forest: &Forest,
    cohort: &Cohort,
    labels: &[bool],
    threshold: f64,
) -> Result<()> {
    if labels.len() != cohort.len() {
        return Err(Error::LengthMismatch {
            left: cohort.len(),
            right: labels.len(),
        });
    }
    let columns = forest
        .feature_names
        .iter()
        .map(|name| cohort.column(name))
        .collect::<Result<Vec<_>>>()?;
    let fallback: Vec<f64> = forest
        .feature_names
        .iter()
        .map(|name| {
            grid.fixed
                .get(name)
                .copied()
                .map_or_else(|| typical_value(cohort, name), Ok)
        })
        .collect::<Result<_>>()?;
    let jx = forest.feature_names.iter().position(|f| *f == grid.x_feature).expect("checked when built");
    let jy = forest.feature_names.iter().position(|f| *f == grid.y_feature).expect("checked when built");
    grid.misclassified.clear();
    for (i, &label) in labels.iter().enumerate() {
        let row: Vec<f64> = columns.iter().zip(&fallback).map(|(c, &f)| c[i].unwrap_or(f)).collect();
        let p = forest.predict_proba(&row);
        if (p >= threshold) != label {
            grid.misclassified.push(MisclassifiedRecord {
                record: i,
                x: row[jx],
                y: row[jy],
                label,
                probability: p,
            });
        }
    }
    Ok(())
}

/// One row per cell (`kind = cell`) followed by one per misclassified
/// record (`kind = misclassified`).
pub fn write_heatmap_csv<W: Write>(grid: &HeatmapGrid, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["kind", &grid.x_feature, &grid.y_feature, "probability", "label", "record"])?;
    for (iy, &y) in grid.y_values.iter().enumerate() {
        for (ix, &x) in grid.x_values.iter().enumerate() {
            w.write_record(["cell", &fmt17(x), &fmt17(y), &fmt17(grid.cell(ix, iy)), "", ""])?;
        }
    }
    for m in &grid.misclassified {
        w.write_record([
            "misclassified",
            &fmt17(m.x),
            &fmt17(m.y),
            &fmt17(m.probability),
            if m.label { "1" } else { "0" },
            &m.record.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("heatmap csv", e))?;
    Ok(())
}
