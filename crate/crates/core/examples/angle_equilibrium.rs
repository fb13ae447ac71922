//! Run the inequality process to equilibrium and fit a Gamma law.
//!
//! ```text
//! cargo run --release --example angle_equilibrium -- [omega] [theta] [seed]
//! ```

use wealthsim::angle::{run_angle, AngleParams};
use wealthsim::config::RunSettings;
use wealthsim::stats::{fit_gamma_mle, gini_empirical, gini_gamma, ks_distance, tail_diagnostic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let omega: f64 = args.next().map_or(Ok(0.5), |s| s.parse())?;
    let theta: f64 = args.next().map_or(Ok(0.5), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse())?;

    let encounters = 1_000_000;
    let settings = RunSettings {
        agents: 1000,
        rounds: encounters,
        seed,
        snapshots: vec![0, encounters / 100, encounters / 10, encounters],
    };
    let params = AngleParams {
        omega,
        theta,
        ..AngleParams::default()
    };
    let snapshots = run_angle(&settings, &params)?;

    println!("omega={omega} theta={theta} seed={seed}");
    println!("{:>10} {:>10} {:>8} {:>8} {:>8}", "encounter", "total", "shape", "gini", "ks");
    for snap in &snapshots {
        let gini = gini_empirical(&snap.wealth)?;
        match fit_gamma_mle(&snap.wealth) {
            Ok(fit) => println!(
                "{:>10} {:>10.4} {:>8.4} {:>8.4} {:>8.4}",
                snap.round,
                snap.total(),
                fit.shape,
                gini,
                ks_distance(&snap.wealth, &fit)
            ),
            Err(_) => println!("{:>10} {:>10.4} {:>8} {:>8.4} {:>8}", snap.round, snap.total(), "-", gini, "-"),
        }
    }

    let last = &snapshots.last().expect("terminal snapshot").wealth;
    let fit = fit_gamma_mle(last)?;
    println!(
        "terminal Gamma fit: shape {:.4}, scale {:.4}; Gini implied by shape {:.4}",
        fit.shape,
        fit.scale,
        gini_gamma(fit.shape)?
    );
    println!("tail verdict: {}", tail_diagnostic(last).verdict);
    Ok(())
}
