//! Two-good exchange economy with stochastic Cobb-Douglas preferences.
//!
//! Each period every agent redraws its preference weight `f` for good x,
//! a single price clears both markets, and agents move to their
//! Cobb-Douglas demands at that price. Wealth is valued in units of x.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunSettings;
use crate::error::{Error, Result};
use crate::matching::partition_agents;
use crate::rng::{RandomStream, StreamLabel};

/// Preference weights are kept strictly inside (0, 1) so holdings never hit zero.
pub const PREFERENCE_FLOOR: f64 = 1e-12;

/// Rayon work-splitting granularity for per-agent updates.
const PAR_CHUNK: usize = 4096;

pub(crate) fn default_endowment() -> f64 {
    1.0
}

pub(crate) fn default_delta() -> f64 {
    0.25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketParams {
    #[serde(default = "default_endowment")]
    pub initial_x: f64,
    #[serde(default = "default_endowment")]
    pub initial_y: f64,
    /// Fraction of agents whose preference shocks are damped.
    #[serde(default)]
    pub damped_fraction: f64,
    /// Half-width of the damped agents' preference interval around 1/2.
    #[serde(default = "default_delta")]
    pub delta: f64,
}

impl Default for MarketParams {
    fn default() -> Self {
        Self {
            initial_x: default_endowment(),
            initial_y: default_endowment(),
            damped_fraction: 0.0,
            delta: default_delta(),
        }
    }
}

pub(crate) fn validate_preferences(damped_fraction: f64, delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&damped_fraction) {
        return Err(Error::Config(format!(
            "damped_fraction must lie in [0, 1], got {damped_fraction}"
        )));
    }
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::Config(format!("delta must lie in [0, 0.5], got {delta}")));
    }
    Ok(())
}

pub(crate) fn validate_endowment(x: f64, y: f64) -> Result<()> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Config(format!(
            "initial endowments must be positive, got ({x}, {y})"
        )));
    }
    Ok(())
}

impl MarketParams {
    pub fn validate(&self) -> Result<()> {
        validate_endowment(self.initial_x, self.initial_y)?;
        validate_preferences(self.damped_fraction, self.delta)
    }
}

/// Per-agent holdings of both goods at the end of `period`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoldingsTable {
    pub period: u64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl HoldingsTable {
    pub fn uniform(n: usize, x0: f64, y0: f64) -> Self {
        Self {
            period: 0,
            x: vec![x0; n],
            y: vec![y0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn totals(&self) -> (f64, f64) {
        (self.x.iter().sum(), self.y.iter().sum())
    }
}

/// Preference weights for one period and the volatility class of each agent.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceDraw {
    pub f: Vec<f64>,
    pub damped: Vec<bool>,
}

/// Fills preference draws for a fixed population.
#[derive(Debug, Clone)]
pub struct PreferenceSampler {
    damped: Vec<bool>,
    delta: f64,
}

impl PreferenceSampler {
    pub fn new(damped: Vec<bool>, delta: f64) -> Result<Self> {
        validate_preferences(0.0, delta)?;
        Ok(Self { damped, delta })
    }

    /// Sampler whose damped class is drawn from its own stream.
    pub fn for_population(seed: u64, n: usize, damped_fraction: f64, delta: f64) -> Result<Self> {
        validate_preferences(damped_fraction, delta)?;
        let mut stream = RandomStream::new(seed, StreamLabel::Damping);
        Self::new(partition_agents(&mut stream, n, damped_fraction)?, delta)
    }

    pub fn damped(&self) -> &[bool] {
        &self.damped
    }

    /// One draw for agent `agent`. Exactly one unit draw is consumed either way.
    #[inline]
    pub fn draw_one(&self, stream: &mut RandomStream, agent: usize) -> f64 {
        let u = stream.unit();
        let f = if self.damped[agent] {
            0.5 + self.delta * (2.0 * u - 1.0)
        } else {
            u
        };
        f.clamp(PREFERENCE_FLOOR, 1.0 - PREFERENCE_FLOOR)
    }

    pub fn draw_all(&self, stream: &mut RandomStream, out: &mut [f64]) {
        for (agent, f) in out.iter_mut().enumerate() {
            *f = self.draw_one(stream, agent);
        }
    }
}

/// Fresh preferences: uniform on [0, 1] for normal agents and uniform on
/// `[0.5 - delta, 0.5 + delta]` for damped ones.
pub fn draw_preferences(stream: &mut RandomStream, damped: &[bool], delta: f64) -> Result<PreferenceDraw> {
    let sampler = PreferenceSampler::new(damped.to_vec(), delta)?;
    let mut f = vec![0.0; damped.len()];
    sampler.draw_all(stream, &mut f);
    Ok(PreferenceDraw {
        f,
        damped: damped.to_vec(),
    })
}

/// Price of y in units of x that clears both markets given last period's
/// holdings and this period's preferences. Sums run in agent order.
pub fn clearing_price(x: &[f64], y: &[f64], f: &[f64]) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&xi, &yi), &fi) in x.iter().zip(y).zip(f) {
        num += (1.0 - fi) * xi;
        den += fi * yi;
    }
    let p = num / den;
    (den > 0.0 && p > 0.0 && p.is_finite()).then_some(p)
}

pub fn equilibrium_price(holdings: &HoldingsTable, prefs: &PreferenceDraw) -> Result<f64> {
    clearing_price(&holdings.x, &holdings.y, &prefs.f).ok_or(Error::DegenerateMarket {
        period: holdings.period + 1,
    })
}

/// Cobb-Douglas demands of one agent at price `p`.
#[inline]
pub fn demand(x: f64, y: f64, f: f64, p: f64) -> (f64, f64) {
    (f * (x + p * y), (1.0 - f) * (x / p + y))
}

fn check_price(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPrice(p))
    }
}

/// Move every agent to its demanded bundle at price `p`.
pub fn execute_demands(holdings: &mut HoldingsTable, f: &[f64], p: f64) -> Result<()> {
    check_price(p)?;
    holdings
        .x
        .par_iter_mut()
        .zip(holdings.y.par_iter_mut())
        .zip(f.par_iter())
        .with_min_len(PAR_CHUNK)
        .for_each(|((x, y), &fi)| {
            let (nx, ny) = demand(*x, *y, fi, p);
            *x = nx;
            *y = ny;
        });
    holdings.period += 1;
    Ok(())
}

/// Wealth of each agent in units of good x.
pub fn wealth_valuation(holdings: &HoldingsTable, p: f64) -> Result<Vec<f64>> {
    check_price(p)?;
    Ok(value_at(&holdings.x, &holdings.y, p))
}

pub(crate) fn value_at(x: &[f64], y: &[f64], p: f64) -> Vec<f64> {
    x.iter().zip(y).map(|(&xi, &yi)| xi + p * yi).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketSnapshot {
    pub period: u64,
    pub price: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub wealth: Vec<f64>,
}

/// Run the competitive economy. The period-0 snapshot is valued at Σx/Σy,
/// the clearing price when every agent is indifferent (f = 1/2).
pub fn run_market(settings: &RunSettings, params: &MarketParams) -> Result<Vec<MarketSnapshot>> {
    params.validate()?;
    let n = settings.agents;
    if n < 2 {
        return Err(Error::InvalidPopulation(n));
    }
    let sampler = PreferenceSampler::for_population(settings.seed, n, params.damped_fraction, params.delta)?;
    let mut stream = RandomStream::new(settings.seed, StreamLabel::Preferences);
    let mut holdings = HoldingsTable::uniform(n, params.initial_x, params.initial_y);
    let mut f = vec![0.5; n];
    let mut schedule = settings.schedule();
    let mut snapshots = Vec::with_capacity(settings.snapshots.len());

    let record = |holdings: &HoldingsTable, price: f64| MarketSnapshot {
        period: holdings.period,
        price,
        x: holdings.x.clone(),
        y: holdings.y.clone(),
        wealth: value_at(&holdings.x, &holdings.y, price),
    };

    if schedule.due(0) {
        let (sx, sy) = holdings.totals();
        snapshots.push(record(&holdings, sx / sy));
    }
    for period in 1..=settings.rounds {
        sampler.draw_all(&mut stream, &mut f);
        let price = clearing_price(&holdings.x, &holdings.y, &f).ok_or(Error::DegenerateMarket { period })?;
        execute_demands(&mut holdings, &f, price)?;
        if schedule.due(period) {
            snapshots.push(record(&holdings, price));
        }
    }
    Ok(snapshots)
}
