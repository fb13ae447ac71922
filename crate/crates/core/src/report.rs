//! Analysis report for a single wealth sample.

use serde::{Deserialize, Serialize};

use crate::stats::{
    fit_gamma_mle, fit_gamma_moments, gini_empirical, gini_gamma, kde_auto, ks_distance, tail_diagnostic, GammaFit,
    KdeEstimate, TailDiagnostic,
};

/// Grid resolution used for report KDEs.
pub const KDE_POINTS: usize = 512;

/// Mean wealth of monopolists against everyone else.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoleWealth {
    pub monopolists: usize,
    pub monopolist_mean: Option<f64>,
    pub others: usize,
    pub other_mean: Option<f64>,
    /// `(monopolist_mean - other_mean) / population mean`.
    pub relative_gap: Option<f64>,
}

impl RoleWealth {
    pub fn compute(wealth: &[f64], monopolists: &[bool]) -> Self {
        let mean_of = |flag: bool| {
            let (sum, count) = wealth
                .iter()
                .zip(monopolists)
                .filter(|(_, &m)| m == flag)
                .fold((0.0, 0usize), |(s, c), (&w, _)| (s + w, c + 1));
            (count, (count > 0).then(|| sum / count as f64))
        };
        let (m_count, m_mean) = mean_of(true);
        let (o_count, o_mean) = mean_of(false);
        let population_mean = wealth.iter().sum::<f64>() / wealth.len() as f64;
        let relative_gap = match (m_mean, o_mean) {
            (Some(m), Some(o)) if population_mean > 0.0 => Some((m - o) / population_mean),
            _ => None,
        };
        Self {
            monopolists: m_count,
            monopolist_mean: m_mean,
            others: o_count,
            other_mean: o_mean,
            relative_gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round: Option<u64>,
    pub agents: usize,
    pub mean_wealth: f64,
    pub gamma_mle: Option<GammaFit>,
    pub gamma_moments: Option<GammaFit>,
    pub gini_empirical: Option<f64>,
    /// Gini implied by the fitted MLE shape.
    pub gini_gamma: Option<f64>,
    pub ks_distance: Option<f64>,
    pub tail: TailDiagnostic,
    pub kde_bandwidth: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roles: Option<RoleWealth>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Analyze a wealth sample. Statistics that are undefined for the sample
/// (for example Gamma fits of a perfectly equal population) are left empty.
pub fn analyze_wealth(wealth: &[f64], monopolists: Option<&[bool]>) -> (AnalysisReport, Option<KdeEstimate>) {
    let mle = fit_gamma_mle(wealth).ok();
    let kde = kde_auto(wealth, KDE_POINTS).ok();
    let report = AnalysisReport {
        model: None,
        round: None,
        agents: wealth.len(),
        mean_wealth: wealth.iter().sum::<f64>() / wealth.len().max(1) as f64,
        gamma_mle: mle,
        gamma_moments: fit_gamma_moments(wealth).ok(),
        gini_empirical: gini_empirical(wealth).ok(),
        gini_gamma: mle.and_then(|f| gini_gamma(f.shape).ok()),
        ks_distance: mle.map(|f| ks_distance(wealth, &f)),
        tail: tail_diagnostic(wealth),
        kde_bandwidth: kde.as_ref().map(|k| k.bandwidth),
        roles: monopolists.map(|m| RoleWealth::compute(wealth, m)),
    };
    (report, kde)
}
