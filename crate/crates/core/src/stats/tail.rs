//! Exponential-versus-power-law diagnostics for the upper tail.
//!
//! Two probes are combined:
//!
//! * Hill estimates of the tail index at the top 10%, 5% and 1%. A genuine
//!   power law gives roughly the same index at every threshold; an
//!   exponential tail gives an index that grows with the threshold.
//! * Mean per-point log-likelihood over the top decile of two laws fitted
//!   to that decile by maximum likelihood: a Pareto law starting at the
//!   decile threshold (its index is the Hill estimate at 10%) and a Gamma
//!   law truncated to the same threshold.
//!
//! Verdict rules:
//!
//! * fewer than [`MIN_TAIL_SAMPLE`] positive values, or fewer than
//!   [`MIN_TAIL_POINTS`] points in the 1% tail: inconclusive;
//! * Gamma likelihood higher and Hill at 1% more than [`HILL_STABILITY`]
//!   above Hill at 10%: exponential-like;
//! * Pareto likelihood higher and the spread of the three Hill estimates
//!   within [`HILL_STABILITY`] of the smallest: power-like;
//! * anything else: inconclusive.

use serde::{Deserialize, Serialize};

use statrs::function::gamma::{gamma_ur, ln_gamma};

pub const TAIL_FRACTIONS: [f64; 3] = [0.10, 0.05, 0.01];
pub const MIN_TAIL_SAMPLE: usize = 1000;
pub const MIN_TAIL_POINTS: usize = 10;
pub const HILL_STABILITY: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailVerdict {
    ExponentialLike,
    PowerLike,
    Inconclusive,
}

impl std::fmt::Display for TailVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TailVerdict::ExponentialLike => "exponential-like",
            TailVerdict::PowerLike => "power-like",
            TailVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HillPoint {
    pub fraction: f64,
    /// Number of order statistics above the threshold.
    pub k: usize,
    pub threshold: f64,
    pub index: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailDiagnostic {
    pub hill: Vec<HillPoint>,
    pub gamma_mean_loglik: Option<f64>,
    pub pareto_mean_loglik: Option<f64>,
    pub verdict: TailVerdict,
}

impl TailDiagnostic {
    fn inconclusive() -> Self {
        Self {
            hill: Vec::new(),
            gamma_mean_loglik: None,
            pareto_mean_loglik: None,
            verdict: TailVerdict::Inconclusive,
        }
    }
}

/// Hill estimate from the `k` largest values of a descending sample, with
/// the `(k+1)`-th largest as threshold.
pub fn hill_estimate(desc: &[f64], k: usize) -> Option<f64> {
    if k == 0 || k >= desc.len() || desc[k] <= 0.0 {
        return None;
    }
    let threshold = desc[k];
    let sum: f64 = desc[..k].iter().map(|&v| (v / threshold).ln()).sum();
    (sum > 0.0).then(|| k as f64 / sum)
}

pub fn tail_diagnostic(sample: &[f64]) -> TailDiagnostic {
    let mut desc: Vec<f64> = sample.iter().copied().filter(|v| *v > 0.0 && v.is_finite()).collect();
    if desc.len() < MIN_TAIL_SAMPLE {
        return TailDiagnostic::inconclusive();
    }
    desc.sort_by(|a, b| b.total_cmp(a));
    let n = desc.len();

    let mut hill = Vec::with_capacity(TAIL_FRACTIONS.len());
    for &fraction in &TAIL_FRACTIONS {
        let k = (fraction * n as f64).floor() as usize;
        if k < MIN_TAIL_POINTS {
            return TailDiagnostic::inconclusive();
        }
        let Some(index) = hill_estimate(&desc, k) else {
            return TailDiagnostic::inconclusive();
        };
        hill.push(HillPoint {
            fraction,
            k,
            threshold: desc[k],
            index,
        });
    }

    let decile = hill[0];
    let top = &desc[..decile.k];
    let u = decile.threshold;
    let alpha = decile.index;
    let pareto = top
        .iter()
        .map(|&y| alpha.ln() + alpha * u.ln() - (alpha + 1.0) * y.ln())
        .sum::<f64>()
        / top.len() as f64;
    let gamma = fit_truncated_gamma(top, u).map(|fit| fit.mean_loglik);

    let indices: Vec<f64> = hill.iter().map(|h| h.index).collect();
    let lo = indices.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = indices.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let stable = (hi - lo) / lo <= HILL_STABILITY;
    let drifts_up = hill[2].index > hill[0].index * (1.0 + HILL_STABILITY);

    let verdict = match gamma {
        Some(g) if g.is_finite() && g > pareto && drifts_up => TailVerdict::ExponentialLike,
        Some(g) if g.is_finite() && g > pareto => TailVerdict::Inconclusive,
        _ if stable => TailVerdict::PowerLike,
        _ => TailVerdict::Inconclusive,
    };

    TailDiagnostic {
        hill,
        gamma_mean_loglik: gamma.filter(|g| g.is_finite()),
        pareto_mean_loglik: Some(pareto),
        verdict,
    }
}

/// Gamma law conditioned on exceeding `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedGammaFit {
    pub shape: f64,
    pub rate: f64,
    pub threshold: f64,
    pub mean_loglik: f64,
}

/// Maximum-likelihood Gamma fit to values known to exceed `threshold`.
///
/// The truncated Gamma is an exponential family in `(shape - 1, -rate)`,
/// so the log-likelihood is concave there and unimodal along each of the
/// log-scaled coordinates searched below: golden-section over the shape,
/// with the rate profiled out by an inner golden-section search.
pub fn fit_truncated_gamma(tail: &[f64], threshold: f64) -> Option<TruncatedGammaFit> {
    if tail.len() < 2 || !(threshold > 0.0) || tail.iter().any(|&y| y < threshold) {
        return None;
    }
    let n = tail.len() as f64;
    let mean = tail.iter().sum::<f64>() / n;
    let mean_ln = tail.iter().map(|y| y.ln()).sum::<f64>() / n;
    let loglik = |shape: f64, rate: f64| {
        let mass = gamma_ur(shape, rate * threshold);
        if !(mass > 0.0) {
            return f64::NEG_INFINITY;
        }
        shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * mean_ln - rate * mean - mass.ln()
    };
    let best_rate = |shape: f64| {
        let ln_rate = golden_max(
            |r| loglik(shape, r.exp()),
            (1e-4 / mean).ln(),
            (1e4 / mean).ln(),
        );
        ln_rate.exp()
    };
    let ln_shape = golden_max(|k| loglik(k.exp(), best_rate(k.exp())), 1e-3f64.ln(), 1e3f64.ln());
    let shape = ln_shape.exp();
    let rate = best_rate(shape);
    let mean_loglik = loglik(shape, rate);
    mean_loglik.is_finite().then_some(TruncatedGammaFit {
        shape,
        rate,
        threshold,
        mean_loglik,
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..90 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RandomStream, StreamLabel};
    use rand::distr::Distribution;
    use rand_distr::{Gamma, Pareto};

    #[test]
    fn gamma_tail_is_exponential_like() {
        let mut s = RandomStream::new(31, StreamLabel::Toss);
        let d = Gamma::new(1.5, 1.0).unwrap();
        let x: Vec<f64> = (0..100_000).map(|_| d.sample(&mut s)).collect();
        let diag = tail_diagnostic(&x);
        assert_eq!(diag.verdict, TailVerdict::ExponentialLike, "{diag:?}");
    }

    #[test]
    fn pareto_tail_is_power_like() {
        let mut s = RandomStream::new(32, StreamLabel::Toss);
        let d = Pareto::new(1.0, 1.5).unwrap();
        let x: Vec<f64> = (0..100_000).map(|_| d.sample(&mut s)).collect();
        let diag = tail_diagnostic(&x);
        assert_eq!(diag.verdict, TailVerdict::PowerLike, "{diag:?}");
        for h in &diag.hill {
            assert!((h.index - 1.5).abs() < 0.2, "{h:?}");
        }
    }

    #[test]
    fn small_samples_are_inconclusive() {
        let x: Vec<f64> = (1..=500).map(f64::from).collect();
        let diag = tail_diagnostic(&x);
        assert_eq!(diag.verdict, TailVerdict::Inconclusive);
        assert!(diag.hill.is_empty());
    }

    #[test]
    fn hill_on_exact_pareto_quantiles() {
        // Deterministic Pareto(α = 2) quantiles: x_i = (i / n)^(-1/2).
        let n = 10_000;
        let desc: Vec<f64> = (1..=n).map(|i| (i as f64 / n as f64).powf(-0.5)).collect();
        let est = hill_estimate(&desc, 1000).unwrap();
        assert!((est - 2.0).abs() < 0.05, "{est}");
        assert_eq!(hill_estimate(&desc, 0), None);
        assert_eq!(hill_estimate(&desc, n), None);
    }

    #[test]
    fn truncated_gamma_recovers_tail_parameters() {
        let mut s = RandomStream::new(33, StreamLabel::Toss);
        let d = Gamma::new(3.0, 0.5).unwrap();
        let u = 2.0;
        let tail: Vec<f64> = (0..400_000).map(|_| d.sample(&mut s)).filter(|&y| y > u).collect();
        assert!(tail.len() > 20_000);
        let fit = fit_truncated_gamma(&tail, u).unwrap();
        assert!((fit.rate - 2.0).abs() < 0.2, "{fit:?}");
        assert!((fit.shape - 3.0).abs() < 0.4, "{fit:?}");
    }

    #[test]
    fn fractions_are_strictly_decreasing() {
        assert!(TAIL_FRACTIONS.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn verdict_serializes_kebab_case() {
        assert_eq!(serde_json::to_string(&TailVerdict::ExponentialLike).unwrap(), "\"exponential-like\"");
        assert_eq!(TailVerdict::PowerLike.to_string(), "power-like");
    }
}
