use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::split::{scan_feature, Found, Sample};
use super::{ForestConfig, Matrix};
use crate::error::{Error, Result};

/// Node of a classification tree. Class counts are `[negative, positive]`
/// and include bootstrap multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        /// Index into the forest's feature names.
        feature: usize,
        threshold: f64,
        impurity_decrease: f64,
        n_node: u64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        class_counts: [u64; 2],
    },
}

impl TreeNode {
    /// Leaf reached by `row` (indexed like the forest's features).
    pub fn leaf_counts(&self, row: impl Fn(usize) -> f64) -> [u64; 2] {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { class_counts } => return *class_counts,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => node = if row(*feature) <= *threshold { left } else { right },
            }
        }
    }

    /// 1 when the leaf majority is positive, 0 when negative, 0.5 on a tie.
    pub fn vote(&self, row: impl Fn(usize) -> f64) -> f64 {
        let [neg, pos] = self.leaf_counts(row);
        match pos.cmp(&neg) {
            std::cmp::Ordering::Greater => 1.0,
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Less => 0.0,
        }
    }

    pub fn n_node(&self) -> u64 {
        match self {
            TreeNode::Split { n_node, .. } => *n_node,
            TreeNode::Leaf { class_counts } => class_counts[0] + class_counts[1],
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    /// Visits every split node as `(feature, n_node, impurity_decrease)`.
    pub fn for_each_split(&self, f: &mut impl FnMut(usize, u64, f64)) {
        if let TreeNode::Split {
            feature,
            n_node,
            impurity_decrease,
            left,
            right,
            ..
        } = self
        {
            f(*feature, *n_node, *impurity_decrease);
            left.for_each_split(f);
            right.for_each_split(f);
        }
    }

    pub fn uses_feature(&self, j: usize) -> bool {
        match self {
            TreeNode::Leaf { .. } => false,
            TreeNode::Split {
                feature, left, right, ..
            } => *feature == j || left.uses_feature(j) || right.uses_feature(j),
        }
    }
}

struct Builder<'a> {
    x: &'a Matrix,
    mtry: usize,
    min_leaf: u64,
    max_depth: Option<usize>,
    buf: Vec<(f64, u32, bool)>,
}

impl Builder<'_> {
    fn counts(samples: &[Sample]) -> [u64; 2] {
        let mut c = [0u64; 2];
        for s in samples {
            c[s.label as usize] += s.weight as u64;
        }
        c
    }

    fn search(&mut self, samples: &[Sample], parent: [u64; 2], features: &[usize]) -> Option<Found> {
        let mut best = None;
        for &f in features {
            scan_feature(self.x.column(f), f, samples, parent, self.min_leaf, &mut self.buf, &mut best);
        }
        best
    }

    fn build(&mut self, samples: &mut [Sample], depth: usize, rng: &mut ChaCha8Rng) -> TreeNode {
        let counts = Self::counts(samples);
        let n = counts[0] + counts[1];
        let stop = counts[0] == 0
            || counts[1] == 0
            || n < 2 * self.min_leaf
            || self.max_depth.is_some_and(|d| depth >= d);
        if stop {
            return TreeNode::Leaf { class_counts: counts };
        }
        let p = self.x.n_features();
        let drawn = sample_indices(rng, p, self.mtry);
        let mut chosen: Vec<usize> = drawn.into_iter().collect();
        chosen.sort_unstable();
        let mut found = self.search(samples, counts, &chosen);
        if found.is_none() && self.mtry < p {
            // keep looking past the subset, as long as some feature splits
            let rest: Vec<usize> = (0..p).filter(|f| chosen.binary_search(f).is_err()).collect();
            found = self.search(samples, counts, &rest);
        }
        let Some(found) = found else {
            return TreeNode::Leaf { class_counts: counts };
        };
        let column = self.x.column(found.feature);
        let mut mid = 0;
        for i in 0..samples.len() {
            if column[samples[i].row as usize] <= found.threshold {
                samples.swap(i, mid);
                mid += 1;
            }
        }
        let split = found.split();
        let (l, r) = samples.split_at_mut(mid);
        let left = self.build(l, depth + 1, rng);
        let right = self.build(r, depth + 1, rng);
        TreeNode::Split {
            feature: found.feature,
            threshold: found.threshold,
            impurity_decrease: split.decrease,
            n_node: n,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

/// Grows one tree on `rows` of `x`. Returns the tree and the rows left out
/// of its bootstrap sample (empty when bootstrapping is off).
pub fn train_tree(
    x: &Matrix,
    y: &[bool],
    rows: &[usize],
    config: &ForestConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(TreeNode, Vec<usize>)> {
    if y.len() != x.n_rows() {
        return Err(Error::LengthMismatch {
            left: x.n_rows(),
            right: y.len(),
        });
    }
    if rows.len() < 2 || x.n_features() == 0 {
        return Err(Error::InsufficientData(
            "a tree needs at least two rows and one feature".into(),
        ));
    }
    let mtry = config.resolve_mtry(x.n_features())?;
    let mut multiplicity = vec![0u32; rows.len()];
    if config.bootstrap {
        let draws = (config.bootstrap_fraction * rows.len() as f64).ceil() as usize;
        for _ in 0..draws {
            multiplicity[rng.gen_range(0..rows.len())] += 1;
        }
    } else {
        multiplicity.iter_mut().for_each(|m| *m = 1);
    }
    let mut samples = Vec::with_capacity(rows.len());
    let mut oob = Vec::new();
    for (&r, &m) in rows.iter().zip(&multiplicity) {
        if m == 0 {
            oob.push(r);
        } else {
            samples.push(Sample {
                row: r as u32,
                weight: m,
                label: y[r],
            });
        }
    }
    let mut builder = Builder {
        x,
        mtry,
        min_leaf: config.min_leaf as u64,
        max_depth: config.max_depth,
        buf: Vec::with_capacity(samples.len()),
    };
    let tree = builder.build(&mut samples, 0, rng);
    Ok((tree, oob))
}
