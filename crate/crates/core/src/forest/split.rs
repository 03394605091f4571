use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};

/// Gini impurity `1 − p₀² − p₁²` of a node with the given class counts.
pub fn gini_impurity(counts: [u64; 2]) -> Result<f64> {
    let n = counts[0] + counts[1];
    if n == 0 {
        return Err(Error::Degenerate("Gini impurity of an empty node".into()));
    }
    Ok(gini_unchecked(counts))
}

pub(crate) fn gini_unchecked(counts: [u64; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    let p0 = counts[0] as f64 / n;
    let p1 = counts[1] as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

/// `gini(parent) − nL/n·gini(left) − nR/n·gini(right)`.
pub(crate) fn weighted_decrease(left: [u64; 2], right: [u64; 2]) -> f64 {
    let parent = [left[0] + right[0], left[1] + right[1]];
    let n = (parent[0] + parent[1]) as f64;
    let nl = (left[0] + left[1]) as f64;
    let nr = (right[0] + right[1]) as f64;
    gini_unchecked(parent) - nl / n * gini_unchecked(left) - nr / n * gini_unchecked(right)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub feature: usize,
    /// Rows with `x <= threshold` go left.
    pub threshold: f64,
    pub decrease: f64,
}

/// Exact split score `(l₀²+l₁²)/n_L + (r₀²+r₁²)/n_R` as a fraction.
/// Maximising it maximises the Gini decrease.
#[derive(Debug, Clone, Copy)]
struct Score {
    num: u128,
    den: u128,
}

impl Score {
    fn of(left: [u64; 2], right: [u64; 2]) -> Self {
        let sq = |c: [u64; 2]| (c[0] as u128).pow(2) + (c[1] as u128).pow(2);
        let nl = (left[0] + left[1]) as u128;
        let nr = (right[0] + right[1]) as u128;
        Score {
            num: sq(left) * nr + sq(right) * nl,
            den: nl * nr,
        }
    }

    fn beats(self, other: Score) -> bool {
        self.num * other.den > other.num * self.den
    }

    /// Whether this split strictly lowers the parent's impurity.
    fn improves(self, parent: [u64; 2]) -> bool {
        let n = (parent[0] + parent[1]) as u128;
        let sq = (parent[0] as u128).pow(2) + (parent[1] as u128).pow(2);
        self.num * n > sq * self.den
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Found {
    pub feature: usize,
    pub threshold: f64,
    pub left: [u64; 2],
    pub right: [u64; 2],
    score: Score,
}

impl Found {
    pub fn split(&self) -> Split {
        Split {
            feature: self.feature,
            threshold: self.threshold,
            decrease: weighted_decrease(self.left, self.right),
        }
    }
}

/// One in-bag sample: matrix row, multiplicity and label.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub row: u32,
    pub weight: u32,
    pub label: bool,
}

/// Scans one feature; updates `best` on strict improvement only, so
/// earlier features and lower thresholds win ties.
pub(crate) fn scan_feature(
    column: &[f64],
    feature: usize,
    samples: &[Sample],
    parent: [u64; 2],
    min_leaf: u64,
    buf: &mut Vec<(f64, u32, bool)>,
    best: &mut Option<Found>,
) {
    buf.clear();
    buf.extend(samples.iter().map(|s| (column[s.row as usize], s.weight, s.label)));
    buf.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let n = parent[0] + parent[1];
    let mut left = [0u64; 2];
    for i in 0..buf.len() - 1 {
        let (v, w, l) = buf[i];
        left[l as usize] += w as u64;
        let next = buf[i + 1].0;
        if next == v {
            continue;
        }
        let nl = left[0] + left[1];
        if nl < min_leaf || n - nl < min_leaf {
            continue;
        }
        let right = [parent[0] - left[0], parent[1] - left[1]];
        let score = Score::of(left, right);
        if !score.improves(parent) {
            continue;
        }
        if best.as_ref().map_or(true, |b| score.beats(b.score)) {
            *best = Some(Found {
                feature,
                threshold: v + (next - v) / 2.0,
                left,
                right,
                score,
            });
        }
    }
}

/// Best Gini split of `rows` (repeats allowed) over `candidates`, or
/// `None` when no split with both children holding at least `min_leaf`
/// rows lowers the impurity. Thresholds are midpoints between consecutive
/// distinct values; ties go to the lower feature index, then the lower
/// threshold.
pub fn best_split(
    x: &Matrix,
    y: &[bool],
    rows: &[usize],
    candidates: &[usize],
    min_leaf: usize,
) -> Option<Split> {
    if rows.len() < 2 {
        return None;
    }
    let samples: Vec<Sample> = rows
        .iter()
        .map(|&r| Sample {
            row: r as u32,
            weight: 1,
            label: y[r],
        })
        .collect();
    let mut parent = [0u64; 2];
    for s in &samples {
        parent[s.label as usize] += 1;
    }
    let mut features = candidates.to_vec();
    features.sort_unstable();
    features.dedup();
    let mut buf = Vec::with_capacity(samples.len());
    let mut best = None;
    for f in features {
        scan_feature(x.column(f), f, &samples, parent, min_leaf.max(1) as u64, &mut buf, &mut best);
    }
    best.map(|b| b.split())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gini_examples() {
        assert_eq!(gini_impurity([10, 0]).unwrap(), 0.0);
        assert_eq!(gini_impurity([5, 5]).unwrap(), 0.5);
        assert_eq!(gini_impurity([3, 1]).unwrap(), 0.375);
        assert!(gini_impurity([0, 0]).is_err());
    }

    fn matrix(cols: Vec<Vec<f64>>) -> Matrix {
        let names = (0..cols.len()).map(|i| format!("f{i}")).collect();
        Matrix::from_columns(names, cols).unwrap()
    }

    #[test]
    fn perfect_separator() {
        let x = matrix(vec![vec![5.0, 5.0, 5.0, 10.0, 10.0, 10.0]]);
        let y = [false, false, false, true, true, true];
        let s = best_split(&x, &y, &[0, 1, 2, 3, 4, 5], &[0], 1).unwrap();
        assert_eq!(s.threshold, 7.5);
        assert_eq!(s.decrease, 0.5);
    }

    #[test]
    fn pure_node_has_no_split() {
        let x = matrix(vec![vec![1.0, 2.0, 3.0]]);
        assert_eq!(best_split(&x, &[true; 3], &[0, 1, 2], &[0], 1), None);
    }

    #[test]
    fn min_leaf_respected() {
        let x = matrix(vec![vec![1.0, 2.0, 3.0, 4.0]]);
        let y = [true, false, false, false];
        let s = best_split(&x, &y, &[0, 1, 2, 3], &[0], 1).unwrap();
        assert_eq!(s.threshold, 1.5);
        let s = best_split(&x, &y, &[0, 1, 2, 3], &[0], 2).unwrap();
        assert_eq!(s.threshold, 2.5);
        assert_eq!(best_split(&x, &y, &[0, 1, 2, 3], &[0], 3), None);
    }

    #[test]
    fn tie_prefers_lower_feature() {
        let x = matrix(vec![vec![0.0, 1.0], vec![0.0, 1.0]]);
        let s = best_split(&x, &[false, true], &[0, 1], &[1, 0], 1).unwrap();
        assert_eq!(s.feature, 0);
    }

    proptest! {
        #[test]
        fn decrease_is_positive_and_bounded(
            vals in prop::collection::vec((0u8..4, any::<bool>()), 2..12)
        ) {
            let x = matrix(vec![vals.iter().map(|v| v.0 as f64).collect()]);
            let y: Vec<bool> = vals.iter().map(|v| v.1).collect();
            let rows: Vec<usize> = (0..y.len()).collect();
            if let Some(s) = best_split(&x, &y, &rows, &[0], 1) {
                let pos = y.iter().filter(|&&l| l).count() as u64;
                let parent = gini_impurity([y.len() as u64 - pos, pos]).unwrap();
                prop_assert!(s.decrease > 0.0 && s.decrease <= parent + 1e-15);
            }
        }
    }
}
