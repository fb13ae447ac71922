//! Gamma distribution fitting.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use super::special::{digamma, trigamma};
use crate::error::{Error, Result};

pub const MIN_FIT_SAMPLE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Mle,
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub shape: f64,
    pub scale: f64,
    pub log_likelihood: f64,
    pub method: FitMethod,
}

impl GammaFit {
    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x.is_infinite() {
            1.0
        } else {
            gamma_lr(self.shape, x / self.scale)
        }
    }

    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else if x.is_infinite() {
            0.0
        } else {
            gamma_ur(self.shape, x / self.scale)
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        (self.shape - 1.0) * x.ln() - x / self.scale - ln_gamma(self.shape) - self.shape * self.scale.ln()
    }
}

/// Sample summaries shared by both estimators.
struct Summary {
    n: f64,
    mean: f64,
    mean_ln: f64,
    variance: f64,
}

fn summarize(sample: &[f64]) -> Result<Summary> {
    if sample.len() < MIN_FIT_SAMPLE {
        return Err(Error::DegenerateSample(format!(
            "need at least {MIN_FIT_SAMPLE} observations, got {}",
            sample.len()
        )));
    }
    if let Some(bad) = sample.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("Gamma fit needs positive finite values, found {bad}")));
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let mean_ln = sample.iter().map(|v| v.ln()).sum::<f64>() / n;
    let variance = sample.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if variance <= 0.0 {
        return Err(Error::DegenerateSample("zero variance".into()));
    }
    Ok(Summary {
        n,
        mean,
        mean_ln,
        variance,
    })
}

fn log_likelihood(s: &Summary, shape: f64, scale: f64) -> f64 {
    s.n * ((shape - 1.0) * s.mean_ln - s.mean / scale - ln_gamma(shape) - shape * scale.ln())
}

/// Maximum-likelihood fit.
///
/// The shape solves `ln k - ψ(k) = ln(mean) - mean(ln x)`, found by Newton's
/// method inside a maintained bracket (bisection whenever Newton would leave
/// it). The scale follows as `mean / k`.
pub fn fit_gamma_mle(sample: &[f64]) -> Result<GammaFit> {
    let s = summarize(sample)?;
    let target = s.mean.ln() - s.mean_ln;
    if !(target > 0.0) {
        return Err(Error::DegenerateSample(
            "log-mean and mean-log coincide; shape is unbounded".into(),
        ));
    }
    // g is strictly decreasing from +inf to 0.
    let g = |k: f64| k.ln() - digamma(k) - target;
    let dg = |k: f64| 1.0 / k - trigamma(k);

    // Minka's closed-form starting point.
    let mut k = (3.0 - target + ((target - 3.0).powi(2) + 24.0 * target).sqrt()) / (12.0 * target);
    let (mut lo, mut hi) = (k, k);
    while g(lo) < 0.0 {
        lo *= 0.5;
    }
    while g(hi) > 0.0 {
        hi *= 2.0;
    }

    for _ in 0..200 {
        let gk = g(k);
        if gk > 0.0 {
            lo = k;
        } else {
            hi = k;
        }
        let mut next = k - gk / dg(k);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - k).abs() / k;
        k = next;
        if step < 1e-10 {
            break;
        }
    }
    let scale = s.mean / k;
    Ok(GammaFit {
        shape: k,
        scale,
        log_likelihood: log_likelihood(&s, k, scale),
        method: FitMethod::Mle,
    })
}

/// Method-of-moments fit: shape `mean²/var`, scale `var/mean` (population variance).
pub fn fit_gamma_moments(sample: &[f64]) -> Result<GammaFit> {
    let s = summarize(sample)?;
    let shape = s.mean * s.mean / s.variance;
    let scale = s.variance / s.mean;
    Ok(GammaFit {
        shape,
        scale,
        log_likelihood: log_likelihood(&s, shape, scale),
        method: FitMethod::Moments,
    })
}
