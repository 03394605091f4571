//! Synthetic cohort generator.
//!
//! Marginals are sampled per stroke group from [`GroupSpec`] parameters:
//! independent Bernoulli indicators, one-hot categorical variables,
//! truncated normal or log-normal continuous values and discrete ordinal
//! scores. NIHSS is sampled as a trajectory (admission, 24 h, 48 h) so that
//! early deterioration is derived rather than drawn. Death and morbidity are
//! assigned through two nested logistic links on the shortlist features with
//! per-group intercepts found by bisection.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::codebook::{FeatureCodebook, FeatureKind, ED, NIHSS0, NIHSS24, NIHSS48};
use super::cohort::{Cohort, Provenance};
use super::record::{derive_clinical_flags, PatientRecord, NIHSS_MAX};
use super::StrokeType;
use crate::error::{Error, Result};
use crate::seed::{derive_path, derive_seed, rng_from};
use crate::stats::special::{pnorm, pnorm_upper};

const CALIBRATION_BRACKET: f64 = 60.0;
const CALIBRATION_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Normal truncated to `[lower, upper]`, location and scale adjusted so
    /// the truncated distribution keeps the requested mean.
    #[default]
    Normal,
    /// Log-normal with the requested mean and SD.
    LogNormal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousSpec {
    pub mean: f64,
    pub sd: f64,
    #[serde(default)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    #[serde(default)]
    pub missing_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

/// One step of the NIHSS trajectory:
/// `next = round(previous · exp(N(log_ratio_mean, log_ratio_sd)) + N(0, noise_sd))`,
/// clipped to [0, 42].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub log_ratio_mean: f64,
    pub log_ratio_sd: f64,
    pub noise_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NihssSpec {
    pub admission_mean: f64,
    pub admission_sd: f64,
    pub to_24h: TrajectoryStep,
    pub to_48h: TrajectoryStep,
    /// Published medians/quartiles the trajectory parameters were fit to.
    pub targets: NihssTargets,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NihssTargets {
    pub admission: Quartiles,
    pub at_24h: Quartiles,
    pub at_48h: Quartiles,
    pub early_deterioration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeTargets {
    /// Informational; the realized value is `morbidity + mortality`.
    pub poor_outcome: f64,
    pub morbidity: f64,
    pub mortality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    /// Feature → prevalence.
    pub binary: BTreeMap<String, f64>,
    /// Categorical variable → (level feature → probability). Probabilities
    /// may sum below 1; the remainder means no level applies.
    pub categorical: BTreeMap<String, BTreeMap<String, f64>>,
    pub continuous: BTreeMap<String, ContinuousSpec>,
    /// Feature → probability of each score 0, 1, 2, ...
    pub ordinal: BTreeMap<String, Vec<f64>>,
    pub nihss: NihssSpec,
    pub outcome: OutcomeTargets,
}

/// Term `weight · (x − center) / scale` of a logistic link. Missing values
/// contribute zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkTerm {
    pub feature: String,
    pub center: f64,
    pub scale: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    /// Log-odds of death.
    pub mortality: Vec<LinkTerm>,
    /// Log-odds of morbidity among survivors.
    pub morbidity: Vec<LinkTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpecs {
    #[serde(rename = "IS")]
    pub is: GroupSpec,
    #[serde(rename = "ICH")]
    pub ich: GroupSpec,
}

impl GroupSpecs {
    pub fn get(&self, t: StrokeType) -> &GroupSpec {
        match t {
            StrokeType::Is => &self.is,
            StrokeType::Ich => &self.ich,
        }
    }
}

/// Parameters of a synthetic cohort. Serialized as JSON for the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSpec {
    pub n_total: usize,
    pub is_fraction: f64,
    #[serde(default)]
    pub early_death_fraction: f64,
    #[serde(default)]
    pub lost_followup_fraction: f64,
    pub groups: GroupSpecs,
    pub signal: SignalSpec,
    /// Probabilities of mRS 0, 1, 2 among good outcomes.
    pub good_mrs_pmf: [f64; 3],
    /// Probabilities of mRS 3, 4, 5 among morbidity outcomes.
    pub morbid_mrs_pmf: [f64; 3],
}

fn check_unit(name: &str, v: f64, open: bool) -> Result<()> {
    let ok = if open {
        v > 0.0 && v < 1.0
    } else {
        (0.0..=1.0).contains(&v)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} = {v} must lie in {}",
            if open { "(0, 1)" } else { "[0, 1]" }
        )))
    }
}

fn check_pmf(name: &str, pmf: &[f64]) -> Result<()> {
    let total: f64 = pmf.iter().sum();
    if pmf.iter().any(|p| !(0.0..=1.0).contains(p)) || (total - 1.0).abs() > 1e-6 {
        return Err(Error::Config(format!("{name} must be a probability vector")));
    }
    Ok(())
}

impl GroupSpec {
    fn validate(&self, label: &str) -> Result<()> {
        for (k, &p) in &self.binary {
            check_unit(&format!("{label}.binary.{k}"), p, true)?;
        }
        for (var, levels) in &self.categorical {
            let total: f64 = levels.values().sum();
            for (k, &p) in levels {
                check_unit(&format!("{label}.categorical.{var}.{k}"), p, false)?;
            }
            if total > 1.0 + 1e-6 {
                return Err(Error::Config(format!(
                    "{label}.categorical.{var} probabilities sum to {total} > 1"
                )));
            }
        }
        for (k, c) in &self.continuous {
            if !(c.sd > 0.0) {
                return Err(Error::Config(format!("{label}.continuous.{k}.sd must be > 0")));
            }
            check_unit(&format!("{label}.continuous.{k}.missing_fraction"), c.missing_fraction, false)?;
            if let (Some(lo), Some(hi)) = (c.lower, c.upper) {
                if lo >= hi {
                    return Err(Error::Config(format!("{label}.continuous.{k} has empty bounds")));
                }
            }
            if c.shape == Shape::LogNormal && !(c.mean > 0.0) {
                return Err(Error::Config(format!(
                    "{label}.continuous.{k}: log-normal needs a positive mean"
                )));
            }
        }
        for (k, pmf) in &self.ordinal {
            check_pmf(&format!("{label}.ordinal.{k}"), pmf)?;
        }
        let n = &self.nihss;
        for (what, sd) in [
            ("admission_sd", n.admission_sd),
            ("to_24h.log_ratio_sd", n.to_24h.log_ratio_sd),
            ("to_48h.log_ratio_sd", n.to_48h.log_ratio_sd),
        ] {
            if !(sd > 0.0) {
                return Err(Error::Config(format!("{label}.nihss.{what} must be > 0")));
            }
        }
        let o = &self.outcome;
        check_unit(&format!("{label}.outcome.mortality"), o.mortality, true)?;
        check_unit(&format!("{label}.outcome.morbidity"), o.morbidity, true)?;
        check_unit(&format!("{label}.outcome.poor_outcome"), o.poor_outcome, true)?;
        if o.mortality + o.morbidity >= 1.0 {
            return Err(Error::Config(format!(
                "{label}: mortality + morbidity must stay below 1"
            )));
        }
        Ok(())
    }
}

impl CohortSpec {
    pub fn validate(&self) -> Result<()> {
        check_unit("is_fraction", self.is_fraction, false)?;
        check_unit("early_death_fraction", self.early_death_fraction, false)?;
        check_unit("lost_followup_fraction", self.lost_followup_fraction, false)?;
        self.groups.is.validate("IS")?;
        self.groups.ich.validate("ICH")?;
        check_pmf("good_mrs_pmf", &self.good_mrs_pmf)?;
        check_pmf("morbid_mrs_pmf", &self.morbid_mrs_pmf)?;
        for t in self.signal.mortality.iter().chain(&self.signal.morbidity) {
            if !(t.scale > 0.0) {
                return Err(Error::Config(format!("link scale for {} must be > 0", t.feature)));
            }
        }
        Ok(())
    }

    /// Overall prevalence targets implied by the group mix.
    pub fn expected_prevalences(&self) -> OutcomeTargets {
        let w = self.is_fraction;
        let mix = |f: fn(&OutcomeTargets) -> f64| {
            w * f(&self.groups.is.outcome) + (1.0 - w) * f(&self.groups.ich.outcome)
        };
        OutcomeTargets {
            poor_outcome: mix(|o| o.poor_outcome),
            morbidity: mix(|o| o.morbidity),
            mortality: mix(|o| o.mortality),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CohortSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Cohort of 6022 patients calibrated to the registry's published
    /// per-group summaries.
    pub fn registry_default() -> Self {
        defaults::registry()
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Sampler {
    Missing,
    Binary(f64),
    /// First level of a categorical variable: samples every level at once.
    Categorical(Vec<(usize, f64)>),
    /// Later levels, already filled by the first.
    CategoricalFilled,
    Continuous(ContinuousSampler),
    Ordinal(Vec<f64>),
    /// NIHSS scores and ED, filled from the trajectory.
    Trajectory,
}

#[derive(Debug, Clone)]
struct ContinuousSampler {
    shape: Shape,
    location: f64,
    scale: f64,
    lower: f64,
    upper: f64,
    missing_fraction: f64,
}

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Mean and SD of N(mu, sigma²) truncated to [lo, hi].
fn truncated_moments(mu: f64, sigma: f64, lo: f64, hi: f64) -> (f64, f64) {
    let a = (lo - mu) / sigma;
    let b = (hi - mu) / sigma;
    let (pa, ta) = if lo.is_finite() { (phi(a), a * phi(a)) } else { (0.0, 0.0) };
    let (pb, tb) = if hi.is_finite() { (phi(b), b * phi(b)) } else { (0.0, 0.0) };
    // upper tails when the window sits right of the mode
    let z = if a > 0.0 {
        pnorm_upper(a) - pnorm_upper(b)
    } else {
        pnorm(b) - pnorm(a)
    }
    .max(f64::MIN_POSITIVE);
    let shift = (pa - pb) / z;
    let var = sigma * sigma * (1.0 + (ta - tb) / z - shift * shift);
    (mu + sigma * shift, var.max(0.0).sqrt())
}

/// Underlying (mu, sigma) whose truncation to [lo, hi] has the requested
/// mean and, as far as the bounds allow, the requested SD.
fn fit_truncated_normal(mean: f64, sd: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !(mean > lo && mean < hi) {
        return Err(Error::Config(format!(
            "mean {mean} lies outside the truncation bounds [{lo}, {hi}]"
        )));
    }
    let mut sigma = sd;
    let mut mu = mean;
    for _ in 0..200 {
        let (mut left, mut right) = (mean - 20.0 * sigma, mean + 20.0 * sigma);
        for _ in 0..200 {
            mu = 0.5 * (left + right);
            if truncated_moments(mu, sigma, lo, hi).0 < mean {
                left = mu;
            } else {
                right = mu;
            }
        }
        let ratio = sd / truncated_moments(mu, sigma, lo, hi).1;
        if (ratio - 1.0).abs() < 1e-12 {
            break;
        }
        sigma = (sigma * ratio).min(sd * 10.0);
    }
    Ok((mu, sigma))
}

impl ContinuousSampler {
    fn new(name: &str, c: &ContinuousSpec) -> Result<Self> {
        let lower = c.lower.unwrap_or(f64::NEG_INFINITY);
        let upper = c.upper.unwrap_or(f64::INFINITY);
        let (location, scale) = match c.shape {
            Shape::Normal => fit_truncated_normal(c.mean, c.sd, lower, upper)
                .map_err(|e| Error::Config(format!("{name}: {e}")))?,
            Shape::LogNormal => {
                let s2 = (1.0 + (c.sd / c.mean).powi(2)).ln();
                (c.mean.ln() - 0.5 * s2, s2.sqrt())
            }
        };
        Ok(Self {
            shape: c.shape,
            location,
            scale,
            lower,
            upper,
            missing_fraction: c.missing_fraction,
        })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Option<f64> {
        let missing = rng.gen::<f64>() < self.missing_fraction;
        let normal = Normal::new(self.location, self.scale).expect("scale validated");
        let mut value = f64::NAN;
        for _ in 0..10_000 {
            let z = normal.sample(rng);
            let v = match self.shape {
                Shape::Normal => z,
                Shape::LogNormal => z.exp(),
            };
            if v >= self.lower && v <= self.upper {
                value = v;
                break;
            }
        }
        if value.is_nan() {
            value = self.location.clamp(self.lower, self.upper);
        }
        // one decimal, as recorded in the registry
        let value = ((value * 10.0).round() / 10.0).clamp(self.lower, self.upper);
        (!missing).then_some(value)
    }
}

fn sample_pmf<R: Rng>(pmf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in pmf.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    pmf.len() - 1
}

struct GroupPlan {
    samplers: Vec<Sampler>,
    nihss: NihssSpec,
    nihss_idx: [usize; 3],
    ed_idx: usize,
}

impl GroupPlan {
    fn build(codebook: &FeatureCodebook, spec: &GroupSpec, t: StrokeType) -> Result<Self> {
        let nihss_idx = [
            codebook.require(NIHSS0)?,
            codebook.require(NIHSS24)?,
            codebook.require(NIHSS48)?,
        ];
        let ed_idx = codebook.require(ED)?;
        let mut samplers = Vec::with_capacity(codebook.len());
        let missing_params =
            |name: &str| Error::Config(format!("no {} generator parameters for `{name}`", t.as_str()));
        for (i, e) in codebook.entries().iter().enumerate() {
            if !e.groups.contains(t) {
                samplers.push(Sampler::Missing);
                continue;
            }
            if nihss_idx.contains(&i) || i == ed_idx {
                samplers.push(Sampler::Trajectory);
                continue;
            }
            let s = match e.kind {
                FeatureKind::Binary => {
                    Sampler::Binary(*spec.binary.get(&e.name).ok_or_else(|| missing_params(&e.name))?)
                }
                FeatureKind::Categorical => {
                    let var = e.variable.as_deref().unwrap_or(&e.name);
                    let levels = spec.categorical.get(var).ok_or_else(|| missing_params(var))?;
                    let first = codebook
                        .entries()
                        .iter()
                        .position(|x| x.variable.as_deref() == Some(var))
                        .expect("entry belongs to its own variable");
                    if first == i {
                        let mut ps = Vec::new();
                        for (level, &p) in levels {
                            ps.push((codebook.require(level)?, p));
                        }
                        ps.sort_by_key(|(j, _)| *j);
                        Sampler::Categorical(ps)
                    } else {
                        Sampler::CategoricalFilled
                    }
                }
                FeatureKind::Continuous => Sampler::Continuous(ContinuousSampler::new(
                    &e.name,
                    spec.continuous.get(&e.name).ok_or_else(|| missing_params(&e.name))?,
                )?),
                FeatureKind::Ordinal => {
                    Sampler::Ordinal(spec.ordinal.get(&e.name).ok_or_else(|| missing_params(&e.name))?.clone())
                }
            };
            samplers.push(s);
        }
        Ok(Self {
            samplers,
            nihss: spec.nihss.clone(),
            nihss_idx,
            ed_idx,
        })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Vec<Option<f64>> {
        let mut values = vec![None; self.samplers.len()];
        for (i, s) in self.samplers.iter().enumerate() {
            match s {
                Sampler::Missing | Sampler::CategoricalFilled | Sampler::Trajectory => {}
                Sampler::Binary(p) => values[i] = Some((rng.gen::<f64>() < *p) as u8 as f64),
                Sampler::Categorical(levels) => {
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    let mut chosen = None;
                    for (j, p) in levels {
                        acc += p;
                        if chosen.is_none() && u < acc {
                            chosen = Some(*j);
                        }
                    }
                    for (j, _) in levels {
                        values[*j] = Some((chosen == Some(*j)) as u8 as f64);
                    }
                }
                Sampler::Continuous(c) => values[i] = c.sample(rng),
                Sampler::Ordinal(pmf) => values[i] = Some(sample_pmf(pmf, rng) as f64),
            }
        }
        let [n0, n24, n48] = self.sample_trajectory(rng);
        values[self.nihss_idx[0]] = Some(n0 as f64);
        values[self.nihss_idx[1]] = Some(n24 as f64);
        values[self.nihss_idx[2]] = Some(n48 as f64);
        let flags = derive_clinical_flags(n0, n24, n48).expect("trajectory clipped to range");
        values[self.ed_idx] = Some(flags.early_deterioration as u8 as f64);
        values
    }

    fn sample_trajectory<R: Rng>(&self, rng: &mut R) -> [u8; 3] {
        let z = |rng: &mut R| -> f64 { rand_distr::StandardNormal.sample(rng) };
        let clip = |v: f64| v.round().clamp(0.0, NIHSS_MAX);
        let s = &self.nihss;
        let n0 = clip(s.admission_mean + s.admission_sd * z(rng));
        let step = |prev: f64, st: &TrajectoryStep, rng: &mut R| {
            let ratio = (st.log_ratio_mean + st.log_ratio_sd * z(rng)).exp();
            clip(prev * ratio + st.noise_sd * z(rng))
        };
        let n24 = step(n0, &s.to_24h, rng);
        let n48 = step(n24, &s.to_48h, rng);
        [n0 as u8, n24 as u8, n48 as u8]
    }
}

fn linear_predictor(terms: &[(usize, &LinkTerm)], values: &[Option<f64>]) -> f64 {
    terms
        .iter()
        .map(|(i, t)| values[*i].map_or(0.0, |x| t.weight * (x - t.center) / t.scale))
        .sum()
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Intercept `a` with `mean(weight_i · σ(a + η_i)) = target`.
fn calibrate_intercept(eta: &[f64], weight: &[f64], target: f64, what: &str) -> Result<f64> {
    let f = |a: f64| {
        eta.iter()
            .zip(weight)
            .map(|(e, w)| w * sigmoid(a + e))
            .sum::<f64>()
            / eta.len() as f64
            - target
    };
    let (mut lo, mut hi) = (-CALIBRATION_BRACKET, CALIBRATION_BRACKET);
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return Err(Error::Calibration(format!(
            "{what}: target prevalence {target} is not reachable"
        )));
    }
    for _ in 0..CALIBRATION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn resolve_terms<'a>(codebook: &FeatureCodebook, terms: &'a [LinkTerm]) -> Result<Vec<(usize, &'a LinkTerm)>> {
    terms
        .iter()
        .map(|t| Ok((codebook.require(&t.feature)?, t)))
        .collect()
}

/// Intercepts found for one stroke group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub mortality_intercept: f64,
    pub morbidity_intercept: f64,
}

/// Draws a cohort from `spec` with the registry codebook. Identical
/// `(spec, seed)` pairs give identical cohorts.
pub fn generate_synthetic_cohort(spec: &CohortSpec, seed: u64) -> Result<Cohort> {
    generate_with_codebook(spec, seed, Arc::new(FeatureCodebook::stroke_registry())).map(|(c, _)| c)
}

pub fn generate_with_codebook(
    spec: &CohortSpec,
    seed: u64,
    codebook: Arc<FeatureCodebook>,
) -> Result<(Cohort, BTreeMap<StrokeType, Calibration>)> {
    spec.validate()?;
    let n = spec.n_total;
    let n_is = (n as f64 * spec.is_fraction).round() as usize;
    let mut types: Vec<StrokeType> = (0..n)
        .map(|i| if i < n_is { StrokeType::Is } else { StrokeType::Ich })
        .collect();
    types.shuffle(&mut rng_from(derive_seed(seed, 0)));

    let plans = [
        GroupPlan::build(&codebook, &spec.groups.is, StrokeType::Is)?,
        GroupPlan::build(&codebook, &spec.groups.ich, StrokeType::Ich)?,
    ];
    let plan_for = |t: StrokeType| match t {
        StrokeType::Is => &plans[0],
        StrokeType::Ich => &plans[1],
    };
    let values: Vec<Vec<Option<f64>>> = types
        .iter()
        .enumerate()
        .map(|(i, &t)| plan_for(t).sample(&mut rng_from(derive_path(seed, &[1, i as u64]))))
        .collect();

    let death_terms = resolve_terms(&codebook, &spec.signal.mortality)?;
    let morbid_terms = resolve_terms(&codebook, &spec.signal.morbidity)?;
    let eta_death: Vec<f64> = values.iter().map(|v| linear_predictor(&death_terms, v)).collect();
    let eta_morbid: Vec<f64> = values.iter().map(|v| linear_predictor(&morbid_terms, v)).collect();

    let mut calibration = BTreeMap::new();
    let mut p_death = vec![0.0; n];
    let mut p_morbid = vec![0.0; n];
    for t in [StrokeType::Is, StrokeType::Ich] {
        let members: Vec<usize> = (0..n).filter(|&i| types[i] == t).collect();
        if members.is_empty() {
            continue;
        }
        let targets = spec.groups.get(t).outcome;
        let eta: Vec<f64> = members.iter().map(|&i| eta_death[i]).collect();
        let ones = vec![1.0; eta.len()];
        let a = calibrate_intercept(&eta, &ones, targets.mortality, &format!("{} mortality", t.as_str()))?;
        let survive: Vec<f64> = eta.iter().map(|e| 1.0 - sigmoid(a + e)).collect();
        let eta_m: Vec<f64> = members.iter().map(|&i| eta_morbid[i]).collect();
        let b = calibrate_intercept(&eta_m, &survive, targets.morbidity, &format!("{} morbidity", t.as_str()))?;
        for &i in &members {
            p_death[i] = sigmoid(a + eta_death[i]);
            p_morbid[i] = sigmoid(b + eta_morbid[i]);
        }
        calibration.insert(
            t,
            Calibration {
                mortality_intercept: a,
                morbidity_intercept: b,
            },
        );
    }

    let records = values
        .into_iter()
        .enumerate()
        .map(|(i, values)| {
            let mut rng = rng_from(derive_path(seed, &[2, i as u64]));
            let mrs_3m = if rng.gen::<f64>() < p_death[i] {
                6
            } else if rng.gen::<f64>() < p_morbid[i] {
                3 + sample_pmf(&spec.morbid_mrs_pmf, &mut rng) as u8
            } else {
                sample_pmf(&spec.good_mrs_pmf, &mut rng) as u8
            };
            let mut flags = rng_from(derive_path(seed, &[3, i as u64]));
            PatientRecord {
                values,
                stroke_type: types[i],
                mrs_3m,
                died_first_24h: flags.gen::<f64>() < spec.early_death_fraction,
                lost_followup: flags.gen::<f64>() < spec.lost_followup_fraction,
            }
        })
        .collect();
    let cohort = Cohort::new(codebook, records, Provenance::Synthetic { seed })?;
    Ok((cohort, calibration))
}

mod defaults;
