use super::gamma::GammaFit;

/// Sup-norm distance between the empirical CDF of `sample` and `cdf`.
///
/// Both one-sided limits are compared at every distinct sample value, so
/// step-function models are handled as well as continuous ones.
pub fn ks_distance_with(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut start = 0;
    while start < sorted.len() {
        let v = sorted[start];
        let mut end = start;
        while end < sorted.len() && sorted[end] == v {
            end += 1;
        }
        let below = start as f64 / n;
        let at = end as f64 / n;
        d = d.max((at - cdf(v)).abs()).max((below - cdf(v.next_down())).abs());
        start = end;
    }
    d
}

/// Kolmogorov-Smirnov distance to a fitted Gamma law.
pub fn ks_distance(sample: &[f64], fit: &GammaFit) -> f64 {
    ks_distance_with(sample, |x| fit.cdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RandomStream, StreamLabel};
    use crate::stats::gamma::{fit_gamma_mle, FitMethod};
    use rand::distr::Distribution;
    use rand_distr::Gamma;

    #[test]
    fn fitted_gamma_sample_is_close() {
        let mut s = RandomStream::new(12, StreamLabel::Toss);
        let d = Gamma::new(1.7, 2.0).unwrap();
        let x: Vec<f64> = (0..10_000).map(|_| d.sample(&mut s)).collect();
        let fit = fit_gamma_mle(&x).unwrap();
        assert!(ks_distance(&x, &fit) < 0.02);
    }

    #[test]
    fn uniform_sample_is_far_from_gamma_two() {
        let mut s = RandomStream::new(13, StreamLabel::Toss);
        let x: Vec<f64> = (0..10_000).map(|_| s.unit()).collect();
        let fit = GammaFit {
            shape: 2.0,
            scale: 1.0,
            log_likelihood: 0.0,
            method: FitMethod::Mle,
        };
        assert!(ks_distance(&x, &fit) > 0.1);
    }

    #[test]
    fn identical_step_cdf_gives_zero() {
        let x = [1.0, 2.0, 2.0, 5.0, 7.5];
        let ecdf = |v: f64| x.iter().filter(|&&s| s <= v).count() as f64 / x.len() as f64;
        assert_eq!(ks_distance_with(&x, ecdf), 0.0);
    }

    #[test]
    fn single_point_against_uniform() {
        // ECDF jumps 0 -> 1 at 0.5; uniform CDF is 0.5 there.
        assert_eq!(ks_distance_with(&[0.5], |v| v.clamp(0.0, 1.0)), 0.5);
    }
}
