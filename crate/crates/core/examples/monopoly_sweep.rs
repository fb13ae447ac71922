//! Reproduce the monopolist-fraction experiment: final wealth densities
//! for p_m = 0, 0.1, 0.2, 0.4, their Gamma fits and an overlay chart.
//!
//! ```text
//! cargo run --release --example monopoly_sweep -- [agents] [rounds] [replicas] [out_dir]
//! ```
//!
//! The defaults (2000 agents, 10^5 rounds, 5 replicas) take a few minutes
//! on one core; pass smaller numbers for a quick look.

use std::path::PathBuf;

use wealthsim::config::{ExperimentConfig, ModelConfig};
use wealthsim::pairwise::PairwiseParams;
use wealthsim::runner::{sweep, SweepSpec, SweepVariable, OVERLAY_FILE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let agents: usize = args.next().map_or(Ok(2000), |s| s.parse())?;
    let rounds: u64 = args.next().map_or(Ok(100_000), |s| s.parse())?;
    let replicas: usize = args.next().map_or(Ok(5), |s| s.parse())?;
    let out = PathBuf::from(args.next().unwrap_or_else(|| "wealthsim-out/monopoly-sweep".into()));

    let spec = SweepSpec {
        base: ExperimentConfig {
            model: ModelConfig::Pairwise(PairwiseParams::default()),
            agents,
            rounds,
            seed: 100,
            snapshots: None,
            output: None,
        },
        variable: SweepVariable::MonopolistFraction,
        values: vec![0.0, 0.1, 0.2, 0.4],
        replicas,
        output: Some(out),
    };
    let summary = sweep(&spec)?;

    println!("{:>5} {:>8} {:>8} {:>7} {:>10} {:>10}", "p_m", "shape", "scale", "gini", "mono mean", "other mean");
    let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
    for m in &summary.means {
        println!(
            "{:>5} {:>8} {:>8} {:>7} {:>10} {:>10}",
            m.value,
            fmt(m.shape),
            fmt(m.scale),
            fmt(m.gini),
            fmt(m.monopolist_mean),
            fmt(m.other_mean)
        );
    }
    println!("wrote {}", summary.output_dir.join(OVERLAY_FILE).display());
    Ok(())
}
