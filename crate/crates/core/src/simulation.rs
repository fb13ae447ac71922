//! Model dispatch and snapshot CSV output.

use std::io::{self, Write};

use crate::angle::{run_angle, WealthVector};
use crate::config::{ExperimentConfig, ModelConfig};
use crate::error::Result;
use crate::market::{run_market, MarketSnapshot};
use crate::pairwise::{run_pairwise, PairwiseRun};

/// Recorded snapshots of one run, whatever the model.
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput {
    Angle(Vec<WealthVector>),
    Market(Vec<MarketSnapshot>),
    Pairwise(PairwiseRun),
}

pub fn simulate(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let settings = config.settings();
    Ok(match &config.model {
        ModelConfig::Angle(p) => RunOutput::Angle(run_angle(&settings, p)?),
        ModelConfig::Market(p) => RunOutput::Market(run_market(&settings, p)?),
        ModelConfig::Pairwise(p) => RunOutput::Pairwise(run_pairwise(&settings, p)?),
    })
}

impl RunOutput {
    /// Round index and wealth vector of the last recorded snapshot.
    pub fn terminal(&self) -> Option<(u64, &[f64])> {
        match self {
            RunOutput::Angle(s) => s.last().map(|s| (s.round, s.wealth.as_slice())),
            RunOutput::Market(s) => s.last().map(|s| (s.period, s.wealth.as_slice())),
            RunOutput::Pairwise(r) => r.snapshots.last().map(|s| (s.round, s.wealth.as_slice())),
        }
    }

    pub fn monopolists(&self) -> Option<&[bool]> {
        match self {
            RunOutput::Pairwise(r) => Some(&r.monopolists),
            _ => None,
        }
    }

    pub fn csv_header(&self) -> &'static str {
        match self {
            RunOutput::Angle(_) => "round,agent_id,wealth",
            RunOutput::Market(_) => "period,agent_id,x,y,wealth,price",
            RunOutput::Pairwise(_) => "round,agent_id,is_monopolist,x,y,wealth,ref_price",
        }
    }

    /// One row per agent per recorded round, rounds in ascending order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.csv_header())?;
        match self {
            RunOutput::Angle(snaps) => {
                for s in snaps {
                    for (id, w) in s.wealth.iter().enumerate() {
                        writeln!(out, "{},{id},{w}", s.round)?;
                    }
                }
            }
            RunOutput::Market(snaps) => {
                for s in snaps {
                    for id in 0..s.wealth.len() {
                        writeln!(out, "{},{id},{},{},{},{}", s.period, s.x[id], s.y[id], s.wealth[id], s.price)?;
                    }
                }
            }
            RunOutput::Pairwise(run) => {
                for s in &run.snapshots {
                    for id in 0..s.wealth.len() {
                        writeln!(
                            out,
                            "{},{id},{},{},{},{},{}",
                            s.round,
                            u8::from(run.monopolists[id]),
                            s.x[id],
                            s.y[id],
                            s.wealth[id],
                            s.ref_price
                        )?;
                    }
                }
            }
        }
        Ok(())
    }
}
