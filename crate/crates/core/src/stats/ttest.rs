use serde::{Deserialize, Serialize};

use super::describe::mean;
use super::special::pt_two_sided;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: f64,
    pub p_two_sided: f64,
    pub abs_t: f64,
}

/// Variance assumption of the two-sample test.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TTestKind {
    /// Unequal variances, Welch–Satterthwaite degrees of freedom.
    #[default]
    Welch,
    /// Pooled variance, `n_a + n_b − 2` degrees of freedom.
    Student,
}

fn sum_sq_dev(x: &[f64], m: f64) -> f64 {
    x.iter().map(|v| (v - m) * (v - m)).sum()
}

fn check_sizes(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "t-test needs at least 2 values per sample (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

fn finish(diff: f64, se: f64, df: f64) -> Result<TTestResult> {
    if se == 0.0 {
        if diff == 0.0 {
            return Err(Error::Degenerate(
                "both samples are constant with equal means; t is undefined".into(),
            ));
        }
        let t = diff.signum() * f64::INFINITY;
        return Ok(TTestResult {
            t,
            df,
            p_two_sided: 0.0,
            abs_t: f64::INFINITY,
        });
    }
    let t = diff / se;
    Ok(TTestResult {
        t,
        df,
        p_two_sided: pt_two_sided(t, df),
        abs_t: t.abs(),
    })
}

/// Welch two-sample t-test.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    check_sizes(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let va = sum_sq_dev(a, ma) / (na - 1.0) / na;
    let vb = sum_sq_dev(b, mb) / (nb - 1.0) / nb;
    let se2 = va + vb;
    let df = if se2 > 0.0 {
        se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0))
    } else {
        na + nb - 2.0
    };
    finish(ma - mb, se2.sqrt(), df)
}

/// Student two-sample t-test with pooled variance.
pub fn student_t(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    check_sizes(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let df = na + nb - 2.0;
    let pooled = (sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / df;
    let se = (pooled * (1.0 / na + 1.0 / nb)).sqrt();
    finish(ma - mb, se, df)
}

pub fn t_test(a: &[f64], b: &[f64], kind: TTestKind) -> Result<TTestResult> {
    match kind {
        TTestKind::Welch => welch_t(a, b),
        TTestKind::Student => student_t(a, b),
    }
}

/// Paired t-test: one-sample t on the differences `a − b`.
pub fn paired_t(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InsufficientData("paired t-test needs at least 2 pairs".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let m = mean(&d);
    let se = (sum_sq_dev(&d, m) / (n - 1.0) / n).sqrt();
    if se == 0.0 && m == 0.0 {
        return Ok(TTestResult {
            t: 0.0,
            df: n - 1.0,
            p_two_sided: 1.0,
            abs_t: 0.0,
        });
    }
    finish(m, se, n - 1.0)
}
