//! Two-good exchange economy: every period all agents redraw their
//! Cobb-Douglas weight and trade at the single market-clearing price.
//!
//! ```text
//! cargo run --release --example market_clearing -- [damped_fraction] [delta] [seed]
//! ```

use wealthsim::config::RunSettings;
use wealthsim::market::{demand, run_market, MarketParams};
use wealthsim::stats::{fit_gamma_mle, gini_empirical, tail_diagnostic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let damped_fraction: f64 = args.next().map_or(Ok(0.0), |s| s.parse())?;
    let delta: f64 = args.next().map_or(Ok(0.25), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse())?;

    let periods = 2000;
    let settings = RunSettings {
        agents: 2000,
        rounds: periods,
        seed,
        snapshots: vec![0, 1, 10, 100, periods],
    };
    let params = MarketParams {
        damped_fraction,
        delta,
        ..MarketParams::default()
    };
    let snaps = run_market(&settings, &params)?;

    println!("damped_fraction={damped_fraction} delta={delta} seed={seed}");
    println!("{:>7} {:>9} {:>12} {:>12} {:>8} {:>8}", "period", "price", "total x", "total y", "shape", "gini");
    for s in &snaps {
        let shape = fit_gamma_mle(&s.wealth).map(|f| format!("{:.3}", f.shape)).unwrap_or("-".into());
        println!(
            "{:>7} {:>9.5} {:>12.6} {:>12.6} {:>8} {:>8.4}",
            s.period,
            s.price,
            s.x.iter().sum::<f64>(),
            s.y.iter().sum::<f64>(),
            shape,
            gini_empirical(&s.wealth)?
        );
    }

    // Demands at the clearing price exhaust both goods exactly.
    let worked = [(1.0, 1.0, 0.3), (1.0, 1.0, 0.7)];
    let p = (0.7 + 0.3) / (0.3 + 0.7);
    let after: Vec<(f64, f64)> = worked.iter().map(|&(x, y, f)| demand(x, y, f, p)).collect();
    println!("two agents with f = 0.3, 0.7 at price {p}: {after:?}");

    let last = &snaps.last().expect("final snapshot").wealth;
    println!("tail verdict: {}", tail_diagnostic(last).verdict);
    Ok(())
}
