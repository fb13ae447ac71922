//! Experiment configuration.
//!
//! A run is described by one JSON document. Unknown keys are rejected.
//!
//! ```json
//! {
//!   "model": { "kind": "pairwise", "monopolist_fraction": 0.2 },
//!   "agents": 2000,
//!   "rounds": 100000,
//!   "seed": 7,
//!   "snapshots": [0, 100000],
//!   "output": "out/pairwise"
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::angle::AngleParams;
use crate::error::{Error, Result};
use crate::market::MarketParams;
use crate::pairwise::PairwiseParams;

/// Environment variable naming the output directory for configs that do not set one.
pub const OUTPUT_DIR_ENV: &str = "WEALTHSIM_OUTPUT_DIR";

/// Output directory used when neither the config nor the environment names one.
pub const DEFAULT_OUTPUT_DIR: &str = "wealthsim-out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    Angle(AngleParams),
    Market(MarketParams),
    Pairwise(PairwiseParams),
}

impl ModelConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::Angle(_) => "angle",
            ModelConfig::Market(_) => "market",
            ModelConfig::Pairwise(_) => "pairwise",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelConfig::Angle(p) => p.validate(),
            ModelConfig::Market(p) => p.validate(),
            ModelConfig::Pairwise(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub agents: usize,
    pub rounds: u64,
    pub seed: u64,
    /// Rounds at which the full state is recorded. Defaults to the final round.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.agents < 2 {
            return Err(Error::InvalidPopulation(self.agents));
        }
        if let Some(snaps) = &self.snapshots {
            if let Some(bad) = snaps.iter().find(|&&r| r > self.rounds) {
                return Err(Error::Config(format!(
                    "snapshot round {bad} lies outside [0, {}]",
                    self.rounds
                )));
            }
        }
        self.model.validate()
    }

    pub fn settings(&self) -> RunSettings {
        let mut snapshots = self.snapshots.clone().unwrap_or_else(|| vec![self.rounds]);
        snapshots.sort_unstable();
        snapshots.dedup();
        RunSettings {
            agents: self.agents,
            rounds: self.rounds,
            seed: self.seed,
            snapshots,
        }
    }

    /// Output directory: the config's own, else `$WEALTHSIM_OUTPUT_DIR`, else `wealthsim-out`.
    pub fn output_dir(&self) -> PathBuf {
        match &self.output {
            Some(p) => p.clone(),
            None => std::env::var_os(OUTPUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
        }
    }
}

/// The population, horizon, seed and recording schedule of a single run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSettings {
    pub agents: usize,
    pub rounds: u64,
    pub seed: u64,
    /// Sorted, deduplicated snapshot rounds.
    pub snapshots: Vec<u64>,
}

impl RunSettings {
    pub fn schedule(&self) -> Schedule<'_> {
        Schedule {
            rounds: &self.snapshots,
            next: 0,
        }
    }
}

/// Cursor over a sorted snapshot list, advanced once per round.
#[derive(Debug)]
pub struct Schedule<'a> {
    rounds: &'a [u64],
    next: usize,
}

impl Schedule<'_> {
    pub fn due(&mut self, round: u64) -> bool {
        while self.next < self.rounds.len() && self.rounds[self.next] < round {
            self.next += 1;
        }
        if self.next < self.rounds.len() && self.rounds[self.next] == round {
            self.next += 1;
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::MatchingMode;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_configs_with_defaults() {
        let c = ExperimentConfig::from_json(
            r#"{"model": {"kind": "angle", "omega": 0.5}, "agents": 10, "rounds": 100, "seed": 1}"#,
        )
        .unwrap();
        assert_eq!(c.model, ModelConfig::Angle(AngleParams::default()));
        assert_eq!(c.settings().snapshots, vec![100]);

        let c = ExperimentConfig::from_json(
            r#"{"model": {"kind": "pairwise"}, "agents": 10, "rounds": 5, "seed": 1, "snapshots": [5, 0, 5]}"#,
        )
        .unwrap();
        match &c.model {
            ModelConfig::Pairwise(p) => assert_eq!(p.matching, MatchingMode::FullMatching),
            other => panic!("{other:?}"),
        }
        assert_eq!(c.settings().snapshots, vec![0, 5]);
    }

    #[test]
    fn rejects_unknown_keys() {
        let top = r#"{"model": {"kind": "market"}, "agents": 10, "rounds": 1, "seed": 1, "extra": 3}"#;
        assert!(matches!(ExperimentConfig::from_json(top), Err(Error::Config(_))));
        let nested = r#"{"model": {"kind": "market", "omgea": 0.3}, "agents": 10, "rounds": 1, "seed": 1}"#;
        assert!(matches!(ExperimentConfig::from_json(nested), Err(Error::Config(_))));
        let kind = r#"{"model": {"kind": "barter"}, "agents": 10, "rounds": 1, "seed": 1}"#;
        assert!(matches!(ExperimentConfig::from_json(kind), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_invalid_values() {
        let tiny = r#"{"model": {"kind": "market"}, "agents": 1, "rounds": 1, "seed": 1}"#;
        assert!(matches!(ExperimentConfig::from_json(tiny), Err(Error::InvalidPopulation(1))));
        let late = r#"{"model": {"kind": "market"}, "agents": 4, "rounds": 3, "seed": 1, "snapshots": [4]}"#;
        assert!(matches!(ExperimentConfig::from_json(late), Err(Error::Config(_))));
        let pm = r#"{"model": {"kind": "pairwise", "monopolist_fraction": 1.2}, "agents": 4, "rounds": 3, "seed": 1}"#;
        assert!(matches!(ExperimentConfig::from_json(pm), Err(Error::Config(_))));
    }

    #[test]
    fn schedule_walks_sorted_rounds() {
        let s = RunSettings {
            agents: 2,
            rounds: 10,
            seed: 0,
            snapshots: vec![0, 3, 10],
        };
        let mut sched = s.schedule();
        let due: Vec<u64> = (0..=10).filter(|&r| sched.due(r)).collect();
        assert_eq!(due, vec![0, 3, 10]);
    }

    fn model_strategy() -> impl Strategy<Value = ModelConfig> {
        let matching = prop_oneof![Just(MatchingMode::SinglePair), Just(MatchingMode::FullMatching)];
        prop_oneof![
            (0.0..=1.0f64, 0.0..=1.0f64, 0.01..100.0f64, matching.clone()).prop_map(|(omega, theta, w, matching)| {
                ModelConfig::Angle(AngleParams {
                    omega,
                    theta,
                    initial_wealth: w,
                    matching,
                })
            }),
            (0.01..10.0f64, 0.01..10.0f64, 0.0..=1.0f64, 0.0..=0.5f64).prop_map(|(x, y, d, delta)| {
                ModelConfig::Market(MarketParams {
                    initial_x: x,
                    initial_y: y,
                    damped_fraction: d,
                    delta,
                })
            }),
            (0.0..=1.0f64, matching, 0.0..=1.0f64, 0.0..=0.5f64).prop_map(|(pm, matching, d, delta)| {
                ModelConfig::Pairwise(PairwiseParams {
                    monopolist_fraction: pm,
                    matching,
                    damped_fraction: d,
                    delta,
                    ..PairwiseParams::default()
                })
            }),
        ]
    }

    proptest! {
        #[test]
        fn config_round_trips_through_json(
            model in model_strategy(),
            agents in 2usize..100_000,
            rounds in 0u64..10_000_000,
            seed in any::<u64>(),
            with_snaps in any::<bool>(),
            output in proptest::option::of("[a-z]{1,8}(/[a-z]{1,8}){0,2}"),
        ) {
            let snapshots = with_snaps.then(|| vec![0, rounds / 2, rounds]);
            let config = ExperimentConfig { model, agents, rounds, seed, snapshots, output: output.map(PathBuf::from) };
            let back = ExperimentConfig::from_json(&config.to_json()).unwrap();
            prop_assert_eq!(back, config);
        }
    }
}
