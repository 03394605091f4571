//! Kolmogorov-Smirnov normality test with estimated mean and SD
//! (Lilliefors), p-value from the Dallal-Wilkinson approximation.

use super::describe::{mean, sample_sd};
use super::special::pnorm;
use super::{sorted_copy, NormalityResult};
use crate::error::{Error, Result};

fn lilliefors_p(d: f64, n: usize) -> f64 {
    let nf = n as f64;
    let (kd, nd) = if n <= 100 {
        (d, nf)
    } else {
        (d * (nf / 100.0).powf(0.49), 100.0)
    };
    let p = (-7.01256 * kd * kd * (nd + 2.78019) + 2.99587 * kd * (nd + 2.78019).sqrt()
        - 0.122119
        + 0.974598 / nd.sqrt()
        + 1.67997 / nd)
        .exp();
    if p <= 0.1 {
        return p;
    }
    let kk = (nf.sqrt() - 0.01 + 0.85 / nf.sqrt()) * d;
    if kk <= 0.302 {
        1.0
    } else if kk <= 0.5 {
        2.76773 - 19.828315 * kk + 80.709644 * kk.powi(2) - 138.55152 * kk.powi(3)
            + 81.218052 * kk.powi(4)
    } else if kk <= 0.9 {
        -4.901232 + 40.662806 * kk - 97.490286 * kk.powi(2) + 94.029866 * kk.powi(3)
            - 32.355711 * kk.powi(4)
    } else if kk <= 1.31 {
        6.198765 - 19.558097 * kk + 18.732015 * kk.powi(2) - 5.958029 * kk.powi(3)
            + 0.6962 * kk.powi(4)
    } else {
        0.0
    }
}

/// One-sample KS statistic against a normal with mean and SD estimated
/// from `x`.
pub fn ks_normality(x: &[f64]) -> Result<NormalityResult> {
    let n = x.len();
    if n < 5 {
        return Err(Error::InsufficientData(format!(
            "KS normality needs at least 5 values (got {n})"
        )));
    }
    let sd = sample_sd(x);
    if sd == 0.0 || !sd.is_finite() {
        return Err(Error::Degenerate("KS normality on a constant sample".into()));
    }
    let m = mean(x);
    let nf = n as f64;
    let d = sorted_copy(x)
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let p = pnorm((v - m) / sd);
            let plus = (i + 1) as f64 / nf - p;
            let minus = p - i as f64 / nf;
            plus.max(minus)
        })
        .fold(0.0, f64::max);
    Ok(NormalityResult::new(d, lilliefors_p(d, n)))
}
