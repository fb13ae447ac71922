//! Run an experiment config file through the library, as the CLI does.
//!
//! ```text
//! cargo run --release --example run_config -- crates/core/examples/configs/pairwise.json
//! ```

use std::path::PathBuf;

use wealthsim::runner::{run_experiment, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/pairwise.json").into()),
    );
    let summary = run_experiment(&path, RunOptions::default())?;
    let report = &summary.artifacts.report;
    println!("output directory: {}", summary.output_dir.display());
    if let Some(fit) = report.gamma_mle {
        println!("Gamma fit: shape {:.4}, scale {:.4}", fit.shape, fit.scale);
    }
    if let Some(g) = report.gini_empirical {
        println!("Gini: {g:.4}");
    }
    if let Some(roles) = report.roles {
        println!(
            "mean wealth: monopolists {:?}, others {:?}",
            roles.monopolist_mean, roles.other_mean
        );
    }
    println!("tail: {}", report.tail.verdict);
    Ok(())
}
