//! Pairwise exchange with monopolistic agents.
//!
//! Matched pairs trade bilaterally. Two ordinary agents (or two
//! monopolists) settle at the price that clears the pair's two-agent
//! market. When exactly one side is a monopolist it picks the price that
//! maximizes its own Cobb-Douglas utility, knowing the counterpart will
//! respond with its price-taking demand and will therefore never be worse
//! off than without trading.

use serde::{Deserialize, Serialize};

use crate::config::RunSettings;
use crate::error::{Error, Result};
use crate::market::{
    clearing_price, default_delta, default_endowment, demand, validate_endowment, validate_preferences, value_at,
    PreferenceSampler,
};
use crate::matching::{partition_monopolists, sample_single_pair, MatchingBuffer, MatchingMode};
use crate::rng::{RandomStream, StreamLabel};

fn default_pairwise_matching() -> MatchingMode {
    MatchingMode::FullMatching
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairwiseParams {
    /// Fraction of agents acting as monopolists, fixed for the run.
    #[serde(default)]
    pub monopolist_fraction: f64,
    #[serde(default = "default_pairwise_matching")]
    pub matching: MatchingMode,
    #[serde(default = "default_endowment")]
    pub initial_x: f64,
    #[serde(default = "default_endowment")]
    pub initial_y: f64,
    #[serde(default)]
    pub damped_fraction: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

impl Default for PairwiseParams {
    fn default() -> Self {
        Self {
            monopolist_fraction: 0.0,
            matching: default_pairwise_matching(),
            initial_x: default_endowment(),
            initial_y: default_endowment(),
            damped_fraction: 0.0,
            delta: default_delta(),
        }
    }
}

impl PairwiseParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.monopolist_fraction) {
            return Err(Error::Config(format!(
                "monopolist_fraction must lie in [0, 1], got {}",
                self.monopolist_fraction
            )));
        }
        validate_endowment(self.initial_x, self.initial_y)?;
        validate_preferences(self.damped_fraction, self.delta)
    }
}

/// Holdings and current preference weight of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trader {
    pub x: f64,
    pub y: f64,
    pub f: f64,
}

impl Trader {
    pub fn new(x: f64, y: f64, f: f64) -> Self {
        Self { x, y, f }
    }

    pub fn utility(&self) -> f64 {
        cobb_douglas_utility(self.x, self.y, self.f)
    }
}

/// `x^f * y^(1 - f)`
pub fn cobb_douglas_utility(x: f64, y: f64, f: f64) -> f64 {
    x.powf(f) * y.powf(1.0 - f)
}

/// Price clearing the two-agent market, or `None` when the pair cannot trade.
pub fn pairwise_competitive_price(a: &Trader, b: &Trader) -> Option<f64> {
    let num = (1.0 - a.f) * a.x + (1.0 - b.f) * b.x;
    let den = a.f * a.y + b.f * b.y;
    let p = num / den;
    (den > 0.0 && p > 0.0 && p.is_finite()).then_some(p)
}

/// What the monopolist ends up with at price `p` once the counterpart
/// trades to its demand: `x = a - b p`, `y = c - d / p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSupply {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ResidualSupply {
    pub fn new(monopolist: &Trader, counterpart: &Trader) -> Self {
        let b = counterpart.f * counterpart.y;
        let d = (1.0 - counterpart.f) * counterpart.x;
        Self {
            a: monopolist.x + d,
            b,
            c: monopolist.y + b,
            d,
        }
    }

    /// Prices at which both of the monopolist's holdings stay positive.
    pub fn feasible_prices(&self) -> (f64, f64) {
        (self.d / self.c, self.a / self.b)
    }

    pub fn holdings_at(&self, p: f64) -> (f64, f64) {
        (self.a - self.b * p, self.c - self.d / p)
    }
}

/// Utility-maximizing price for the monopolist, the positive root of
/// `f_m B C p² + B D (1 - 2 f_m) p - (1 - f_m) A D = 0`.
///
/// Returns `None` when the counterpart has nothing to give in one of the
/// goods (`B = 0` or `D = 0`); the optimum is then unbounded.
pub fn monopoly_price(monopolist: &Trader, counterpart: &Trader) -> Option<f64> {
    let r = ResidualSupply::new(monopolist, counterpart);
    if !(r.b > 0.0 && r.d > 0.0) {
        return None;
    }
    let fm = monopolist.f;
    let qa = fm * r.b * r.c;
    let qb = r.b * r.d * (1.0 - 2.0 * fm);
    let qc = (1.0 - fm) * r.a * r.d;
    let root = (qb * qb + 4.0 * qa * qc).sqrt();
    // Pick the cancellation-free form of the positive root.
    let p = if qb >= 0.0 {
        2.0 * qc / (qb + root)
    } else {
        (root - qb) / (2.0 * qa)
    };
    (p > 0.0 && p.is_finite()).then_some(p)
}

/// Which member of a pair holds monopoly power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSide {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "regime")]
pub enum Regime {
    Competitive,
    Monopoly { monopolist: PairSide },
    NoTrade,
}

/// Regime and price for a matched pair. Monopoly applies only when exactly
/// one side is a monopolist; two monopolists neutralize each other.
pub fn resolve_pair(a: &Trader, b: &Trader, a_monopolist: bool, b_monopolist: bool) -> (Regime, f64) {
    let monopoly = match (a_monopolist, b_monopolist) {
        (true, false) => Some((PairSide::First, monopoly_price(a, b))),
        (false, true) => Some((PairSide::Second, monopoly_price(b, a))),
        _ => None,
    };
    if let Some((side, Some(p))) = monopoly {
        return (Regime::Monopoly { monopolist: side }, p);
    }
    match pairwise_competitive_price(a, b) {
        Some(p) => (Regime::Competitive, p),
        None => (Regime::NoTrade, f64::NAN),
    }
}

/// Post-trade holdings `[(x_a, y_a), (x_b, y_b)]`.
pub fn settle(a: &Trader, b: &Trader, regime: Regime, price: f64) -> Result<[(f64, f64); 2]> {
    let out = match regime {
        Regime::NoTrade => return Ok([(a.x, a.y), (b.x, b.y)]),
        Regime::Competitive => {
            check_price(price)?;
            [demand(a.x, a.y, a.f, price), demand(b.x, b.y, b.f, price)]
        }
        Regime::Monopoly { monopolist } => {
            check_price(price)?;
            let (m, n) = match monopolist {
                PairSide::First => (a, b),
                PairSide::Second => (b, a),
            };
            let served = demand(n.x, n.y, n.f, price);
            let kept = ResidualSupply::new(m, n).holdings_at(price);
            match monopolist {
                PairSide::First => [kept, served],
                PairSide::Second => [served, kept],
            }
        }
    };
    if out.iter().any(|&(x, y)| !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::Domain(format!(
            "trade at price {price} under {regime:?} produced negative holdings {out:?}"
        )));
    }
    Ok(out)
}

fn check_price(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPrice(p))
    }
}

/// Full record of one bilateral trade.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTradeOutcome {
    pub pair: (usize, usize),
    pub regime: Regime,
    pub price: f64,
    pub before: [Trader; 2],
    pub after: [(f64, f64); 2],
    pub utility_before: [f64; 2],
    pub utility_after: [f64; 2],
}

impl PairTradeOutcome {
    /// Both sides' utilities weakly improve, up to relative tolerance `tol`.
    pub fn is_voluntary(&self, tol: f64) -> bool {
        (0..2).all(|k| self.utility_after[k] >= self.utility_before[k] * (1.0 - tol))
    }
}

pub fn execute_pair_trade(
    pair: (usize, usize),
    a: &Trader,
    b: &Trader,
    regime: Regime,
    price: f64,
) -> Result<PairTradeOutcome> {
    let after = settle(a, b, regime, price)?;
    Ok(PairTradeOutcome {
        pair,
        regime,
        price,
        before: [*a, *b],
        after,
        utility_before: [a.utility(), b.utility()],
        utility_after: [
            cobb_douglas_utility(after[0].0, after[0].1, a.f),
            cobb_douglas_utility(after[1].0, after[1].1, b.f),
        ],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseSnapshot {
    pub round: u64,
    pub ref_price: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub wealth: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseRun {
    pub monopolists: Vec<bool>,
    pub snapshots: Vec<PairwiseSnapshot>,
}

struct Economy {
    x: Vec<f64>,
    y: Vec<f64>,
    f: Vec<f64>,
    monopolists: Vec<bool>,
}

impl Economy {
    #[inline]
    fn trade(&mut self, i: usize, j: usize) -> Result<()> {
        let a = Trader::new(self.x[i], self.y[i], self.f[i]);
        let b = Trader::new(self.x[j], self.y[j], self.f[j]);
        let (regime, price) = resolve_pair(&a, &b, self.monopolists[i], self.monopolists[j]);
        let [(xa, ya), (xb, yb)] = settle(&a, &b, regime, price)?;
        self.x[i] = xa;
        self.y[i] = ya;
        self.x[j] = xb;
        self.y[j] = yb;
        Ok(())
    }

    fn snapshot(&self, round: u64) -> Result<PairwiseSnapshot> {
        let ref_price = clearing_price(&self.x, &self.y, &self.f).ok_or(Error::DegenerateMarket { period: round })?;
        Ok(PairwiseSnapshot {
            round,
            ref_price,
            x: self.x.clone(),
            y: self.y.clone(),
            wealth: value_at(&self.x, &self.y, ref_price),
        })
    }
}

/// Run the bilateral economy.
///
/// Each round redraws preferences, matches agents and lets every pair
/// trade. In single-pair mode only the matched pair redraws. Wealth is
/// valued at the population-wide clearing price for current holdings and
/// the latest preference draws; before the first round every agent's
/// weight is 1/2.
pub fn run_pairwise(settings: &RunSettings, params: &PairwiseParams) -> Result<PairwiseRun> {
    params.validate()?;
    let n = settings.agents;
    if n < 2 {
        return Err(Error::InvalidPopulation(n));
    }
    let mut roles = RandomStream::new(settings.seed, StreamLabel::Roles);
    let monopolists = partition_monopolists(&mut roles, n, params.monopolist_fraction)?;
    let sampler = PreferenceSampler::for_population(settings.seed, n, params.damped_fraction, params.delta)?;
    let mut prefs = RandomStream::new(settings.seed, StreamLabel::Preferences);
    let mut matching = RandomStream::new(settings.seed, StreamLabel::Matching);
    let mut buffer = MatchingBuffer::new(n);

    let mut economy = Economy {
        x: vec![params.initial_x; n],
        y: vec![params.initial_y; n],
        f: vec![0.5; n],
        monopolists,
    };
    let mut schedule = settings.schedule();
    let mut snapshots = Vec::with_capacity(settings.snapshots.len());

    if schedule.due(0) {
        snapshots.push(economy.snapshot(0)?);
    }
    for round in 1..=settings.rounds {
        match params.matching {
            MatchingMode::FullMatching => {
                sampler.draw_all(&mut prefs, &mut economy.f);
                let (order, _) = buffer.draw(&mut matching);
                for pair in order.chunks_exact(2) {
                    economy.trade(pair[0], pair[1])?;
                }
            }
            MatchingMode::SinglePair => {
                let (i, j) = sample_single_pair(&mut matching, n)?;
                economy.f[i] = sampler.draw_one(&mut prefs, i);
                economy.f[j] = sampler.draw_one(&mut prefs, j);
                economy.trade(i, j)?;
            }
        }
        if schedule.due(round) {
            snapshots.push(economy.snapshot(round)?);
        }
    }
    Ok(PairwiseRun {
        monopolists: economy.monopolists,
        snapshots,
    })
}
