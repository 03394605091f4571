use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from};

/// Fold of every record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub fold_of: Vec<usize>,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] != fold).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &f in &self.fold_of {
            s[f] += 1;
        }
        s
    }
}

/// Every positive plus an equally sized uniform subset of the negatives
/// (or the other way round), in random order.
pub fn undersample(labels: &[bool], seed: u64) -> Result<Vec<usize>> {
    let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::InsufficientData(format!(
            "undersampling needs both classes (positives {}, negatives {})",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = rng_from(seed);
    let m = pos.len().min(neg.len());
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut kept: Vec<usize> = pos[..m].iter().chain(&neg[..m]).copied().collect();
    kept.shuffle(&mut rng);
    Ok(kept)
}

/// Per class, shuffled round-robin over `k` folds. Negatives continue the
/// rotation where positives stopped, so fold sizes differ by at most one.
pub fn stratified_kfold(labels: &[bool], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::Config("k must be at least 2".into()));
    }
    let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if pos.len() < k || neg.len() < k {
        return Err(Error::InsufficientData(format!(
            "{k} folds need {k} records per class (positives {}, negatives {})",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = rng_from(seed);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut fold_of = vec![0; labels.len()];
    for (slot, &i) in pos.iter().chain(&neg).enumerate() {
        fold_of[i] = slot % k;
    }
    Ok(FoldAssignment { k, fold_of })
}

/// Shuffled round-robin ignoring labels.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 || n < k {
        return Err(Error::InsufficientData(format!("cannot split {n} records into {k} folds")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from(seed));
    let mut fold_of = vec![0; n];
    for (slot, &i) in order.iter().enumerate() {
        fold_of[i] = slot % k;
    }
    Ok(FoldAssignment { k, fold_of })
}

/// Seeds owned by one repetition; each stage draws from its own stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionSeeds {
    pub repetition: u64,
    pub shuffle: u64,
    pub undersample: u64,
    pub folds: u64,
    pub models: u64,
}

impl RepetitionSeeds {
    fn new(repetition: u64) -> Self {
        Self {
            repetition,
            shuffle: derive_seed(repetition, 0),
            undersample: derive_seed(repetition, 1),
            folds: derive_seed(repetition, 2),
            models: derive_seed(repetition, 3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResamplePlan {
    pub master_seed: u64,
    pub k: usize,
    pub repetitions: Vec<RepetitionSeeds>,
}

/// One repetition made concrete for a label vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repetition {
    pub seeds: RepetitionSeeds,
    /// Indices into the original records, in shuffled order.
    pub kept: Vec<usize>,
    /// Folds over positions of `kept`.
    pub folds: FoldAssignment,
}

/// One child seed per repetition derived from `master_seed`.
pub fn build_resample_plan(master_seed: u64, repetitions: usize, k: usize) -> Result<ResamplePlan> {
    if repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::Config("k must be at least 2".into()));
    }
    Ok(ResamplePlan {
        master_seed,
        k,
        repetitions: (0..repetitions as u64)
            .map(|r| RepetitionSeeds::new(derive_seed(master_seed, r)))
            .collect(),
    })
}

impl ResamplePlan {
    /// Shuffle, undersample and fold repetition `r` of `labels`.
    pub fn realize(&self, r: usize, labels: &[bool], stratify: bool) -> Result<Repetition> {
        let seeds = self.repetitions[r];
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.shuffle(&mut rng_from(seeds.shuffle));
        let shuffled: Vec<bool> = order.iter().map(|&i| labels[i]).collect();
        let kept: Vec<usize> = undersample(&shuffled, seeds.undersample)?
            .into_iter()
            .map(|i| order[i])
            .collect();
        let kept_labels: Vec<bool> = kept.iter().map(|&i| labels[i]).collect();
        let folds = if stratify {
            stratified_kfold(&kept_labels, self.k, seeds.folds)?
        } else {
            kfold(kept.len(), self.k, seeds.folds)?
        };
        Ok(Repetition { seeds, kept, folds })
    }
}
