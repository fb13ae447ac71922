//! Angle's inequality process.
//!
//! Two agents meet, a biased coin decides the winner, and the winner takes a
//! fixed share `omega` of the loser's wealth. Pair totals are conserved, so
//! the population's total wealth never changes.

use serde::{Deserialize, Serialize};

use crate::config::RunSettings;
use crate::error::{Error, Result};
use crate::matching::{sample_single_pair, MatchingBuffer, MatchingMode};
use crate::rng::{RandomStream, StreamLabel};

fn default_theta() -> f64 {
    0.5
}

fn default_initial_wealth() -> f64 {
    1.0
}

fn default_angle_matching() -> MatchingMode {
    MatchingMode::SinglePair
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleParams {
    /// Share of the loser's wealth taken by the winner.
    pub omega: f64,
    /// Probability that the poorer agent of a pair wins the toss.
    #[serde(default = "default_theta")]
    pub theta: f64,
    /// Uniform endowment of every agent.
    #[serde(default = "default_initial_wealth")]
    pub initial_wealth: f64,
    #[serde(default = "default_angle_matching")]
    pub matching: MatchingMode,
}

impl Default for AngleParams {
    fn default() -> Self {
        Self {
            omega: 0.5,
            theta: default_theta(),
            initial_wealth: default_initial_wealth(),
            matching: default_angle_matching(),
        }
    }
}

impl AngleParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::Config(format!("omega must lie in [0, 1], got {}", self.omega)));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Config(format!("theta must lie in [0, 1], got {}", self.theta)));
        }
        if !(self.initial_wealth > 0.0 && self.initial_wealth.is_finite()) {
            return Err(Error::Config(format!(
                "initial_wealth must be positive, got {}",
                self.initial_wealth
            )));
        }
        Ok(())
    }
}

/// Per-agent wealth at a given round.
#[derive(Debug, Clone, PartialEq)]
pub struct WealthVector {
    pub round: u64,
    pub wealth: Vec<f64>,
}

impl WealthVector {
    pub fn uniform(n: usize, w0: f64) -> Self {
        Self {
            round: 0,
            wealth: vec![w0; n],
        }
    }

    pub fn total(&self) -> f64 {
        self.wealth.iter().sum()
    }
}

/// Decide whether agent `i` wins against agent `j` given a unit draw `u`.
///
/// The poorer agent wins with probability `theta`; equal wealth is a fair coin.
#[inline]
pub fn toss_from_unit(u: f64, w_i: f64, w_j: f64, theta: f64) -> bool {
    let p_i = if w_i < w_j {
        theta
    } else if w_i > w_j {
        1.0 - theta
    } else {
        0.5
    };
    u < p_i
}

/// Biased coin toss. Returns `true` when agent `i` wins (D = 1).
#[inline]
pub fn winner_toss(stream: &mut RandomStream, w_i: f64, w_j: f64, theta: f64) -> bool {
    toss_from_unit(stream.unit(), w_i, w_j, theta)
}

/// Apply one encounter in place. All agents other than `i` and `j` are untouched.
pub fn encounter_step(wealth: &mut [f64], i: usize, j: usize, i_wins: bool, omega: f64) -> Result<()> {
    if i == j {
        return Err(Error::InvalidPair(i));
    }
    transfer(wealth, i, j, i_wins, omega);
    Ok(())
}

#[inline]
fn transfer(wealth: &mut [f64], i: usize, j: usize, i_wins: bool, omega: f64) {
    let (winner, loser) = if i_wins { (i, j) } else { (j, i) };
    let taken = omega * wealth[loser];
    wealth[loser] -= taken;
    wealth[winner] += taken;
}

/// Evolve a uniform endowment for `settings.rounds` rounds and record the
/// scheduled snapshots.
///
/// In single-pair mode a round is one encounter; in full-matching mode a
/// round pairs off the whole population and every pair has an encounter.
pub fn run_angle(settings: &RunSettings, params: &AngleParams) -> Result<Vec<WealthVector>> {
    params.validate()?;
    let n = settings.agents;
    if n < 2 {
        return Err(Error::InvalidPopulation(n));
    }
    let mut matching = RandomStream::new(settings.seed, StreamLabel::Matching);
    let mut tosses = RandomStream::new(settings.seed, StreamLabel::Toss);
    let mut state = WealthVector::uniform(n, params.initial_wealth);
    let mut buffer = MatchingBuffer::new(n);
    let mut schedule = settings.schedule();
    let mut snapshots = Vec::with_capacity(settings.snapshots.len());

    if schedule.due(0) {
        snapshots.push(state.clone());
    }
    for round in 1..=settings.rounds {
        match params.matching {
            MatchingMode::SinglePair => {
                let (i, j) = sample_single_pair(&mut matching, n)?;
                let w = &mut state.wealth;
                let i_wins = winner_toss(&mut tosses, w[i], w[j], params.theta);
                transfer(w, i, j, i_wins, params.omega);
            }
            MatchingMode::FullMatching => {
                let (order, _) = buffer.draw(&mut matching);
                let w = &mut state.wealth;
                for pair in order.chunks_exact(2) {
                    let (i, j) = (pair[0], pair[1]);
                    let i_wins = winner_toss(&mut tosses, w[i], w[j], params.theta);
                    transfer(w, i, j, i_wins, params.omega);
                }
            }
        }
        state.round = round;
        if schedule.due(round) {
            snapshots.push(state.clone());
        }
    }
    Ok(snapshots)
}
