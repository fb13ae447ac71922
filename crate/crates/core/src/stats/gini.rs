use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Empirical Gini coefficient, `Σ (2i - n - 1) w_(i) / (n Σ w)` over the
/// ascending order statistics.
pub fn gini_empirical(sample: &[f64]) -> Result<f64> {
    if sample.len() < 2 {
        return Err(Error::Domain(format!("Gini needs at least 2 values, got {}", sample.len())));
    }
    if let Some(bad) = sample.iter().find(|&&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("Gini needs nonnegative finite values, found {bad}")));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let total: f64 = sorted.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain("Gini of an all-zero sample is undefined".into()));
    }
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &w)| (2.0 * (i + 1) as f64 - n - 1.0) * w)
        .sum();
    // Nonnegative in exact arithmetic; rounding can dip below zero for
    // equal samples.
    Ok((weighted / (n * total)).max(0.0))
}

/// Gini coefficient of a Gamma law with shape `lambda`,
/// `Γ(λ + ½) / (√π Γ(λ + 1))`.
///
/// For moderate shapes the ratio is built from its value at the fractional
/// part via `r(λ + 1) = r(λ) (λ + ½) / (λ + 1)`, with `r(0) = 1`, so integer
/// shapes come out as exact products of rationals.
pub fn gini_gamma(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("Gamma shape must be positive, got {lambda}")));
    }
    const RECURRENCE_LIMIT: f64 = 64.0;
    let direct = |l: f64| (ln_gamma(l + 0.5) - ln_gamma(l + 1.0)).exp() / std::f64::consts::PI.sqrt();
    if lambda > RECURRENCE_LIMIT {
        return Ok(direct(lambda));
    }
    let whole = lambda.floor();
    let frac = lambda - whole;
    let mut r = if frac == 0.0 { 1.0 } else { direct(frac) };
    let mut l = frac;
    for _ in 0..whole as u32 {
        r *= (l + 0.5) / (l + 1.0);
        l += 1.0;
    }
    Ok(r)
}
