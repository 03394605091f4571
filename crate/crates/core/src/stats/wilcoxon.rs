//! Paired Wilcoxon signed-rank test.
//!
//! Zero differences are dropped before ranking. The exact null distribution
//! is used when at most 25 non-zero differences remain and their magnitudes
//! are untied; otherwise a normal approximation with tie and continuity
//! corrections.

use serde::{Deserialize, Serialize};

use super::special::pnorm_upper;
use crate::error::{Error, Result};

pub const EXACT_MAX_N: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WilcoxonMethod {
    Exact,
    NormalApproximation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    pub w_plus: f64,
    pub w_minus: f64,
    pub n_effective: usize,
    pub p_two_sided: f64,
    pub method: WilcoxonMethod,
}

/// Midranks (1-based) of `v`, plus the tie-group sizes.
fn midranks(v: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j + 2) as f64 / 2.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        if j > i {
            ties.push(j - i + 1);
        }
        i = j + 1;
    }
    (ranks, ties)
}

/// Number of sign assignments of ranks 1..=n giving each W+ value.
fn signed_rank_counts(n: usize) -> Vec<u64> {
    let max = n * (n + 1) / 2;
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    for k in 1..=n {
        for s in (k..=max).rev() {
            counts[s] += counts[s - k];
        }
    }
    counts
}

fn exact_p(w_plus: f64, n: usize) -> f64 {
    let counts = signed_rank_counts(n);
    let total = (1u64 << n) as f64;
    let w = w_plus.round() as usize;
    let lower: u64 = counts[..=w].iter().sum();
    let upper: u64 = counts[w..].iter().sum();
    (2.0 * lower.min(upper) as f64 / total).min(1.0)
}

pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|v| *v != 0.0)
        .collect();
    let n = d.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            w_plus: 0.0,
            w_minus: 0.0,
            n_effective: 0,
            p_two_sided: 1.0,
            method: WilcoxonMethod::Exact,
        });
    }
    let magnitudes: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, ties) = midranks(&magnitudes);
    let w_plus: f64 = d
        .iter()
        .zip(&ranks)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, r)| r)
        .sum();
    let nf = n as f64;
    let total = nf * (nf + 1.0) / 2.0;
    let w_minus = total - w_plus;

    if n <= EXACT_MAX_N && ties.is_empty() {
        return Ok(WilcoxonResult {
            w_plus,
            w_minus,
            n_effective: n,
            p_two_sided: exact_p(w_plus, n),
            method: WilcoxonMethod::Exact,
        });
    }

    let mean = total / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    let p = if var <= 0.0 {
        1.0
    } else {
        let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
        (2.0 * pnorm_upper(z)).min(1.0)
    };
    Ok(WilcoxonResult {
        w_plus,
        w_minus,
        n_effective: n,
        p_two_sided: p,
        method: WilcoxonMethod::NormalApproximation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-sided p by listing all 2^n sign assignments of ranks 1..=n.
    fn enumerate_p(w_plus: f64, n: usize) -> f64 {
        let mut le = 0u64;
        let mut ge = 0u64;
        for mask in 0u64..(1 << n) {
            let s: f64 = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| (k + 1) as f64).sum();
            if s <= w_plus {
                le += 1;
            }
            if s >= w_plus {
                ge += 1;
            }
        }
        (2.0 * le.min(ge) as f64 / (1u64 << n) as f64).min(1.0)
    }

    #[test]
    fn identical_samples() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!((r.n_effective, r.p_two_sided), (0, 1.0));
    }

    #[test]
    fn three_positive_differences() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.w_plus, 6.0);
        assert_eq!(r.method, WilcoxonMethod::Exact);
        assert!((r.p_two_sided - 0.25).abs() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            wilcoxon_signed_rank(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn exact_matches_enumeration_for_every_statistic() {
        for n in 1..=10 {
            for w in 0..=n * (n + 1) / 2 {
                let got = exact_p(w as f64, n);
                assert!((got - enumerate_p(w as f64, n)).abs() < 1e-15, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn ties_force_normal_approximation() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [0.0, 1.0, 1.0, 1.0];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.method, WilcoxonMethod::NormalApproximation);
        assert_eq!(r.w_plus + r.w_minus, 10.0);
    }
}
