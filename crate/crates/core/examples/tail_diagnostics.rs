//! Tell exponential tails from power-law tails.
//!
//! ```text
//! cargo run --release --example tail_diagnostics
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Pareto};

use wealthsim::config::RunSettings;
use wealthsim::pairwise::{run_pairwise, PairwiseParams};
use wealthsim::stats::tail_diagnostic;

fn show(name: &str, sample: &[f64]) {
    let d = tail_diagnostic(sample);
    let hill: Vec<String> = d.hill.iter().map(|h| format!("{:.2}", h.index)).collect();
    let ll = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.3}"));
    println!(
        "{name:<26} hill(10%,5%,1%) = [{}]  loglik gamma {} pareto {}  -> {}",
        hill.join(", "),
        ll(d.gamma_mean_loglik),
        ll(d.pareto_mean_loglik),
        d.verdict
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 50_000;
    let draw = |d: &dyn Fn(&mut ChaCha8Rng) -> f64, rng: &mut ChaCha8Rng| (0..n).map(|_| d(rng)).collect::<Vec<f64>>();

    let exp = Exp::new(1.0)?;
    show("exponential", &draw(&|r| exp.sample(r), &mut rng));
    let gamma = Gamma::new(2.0, 1.0)?;
    show("gamma(2)", &draw(&|r| gamma.sample(r), &mut rng));
    let pareto = Pareto::new(1.0, 1.5)?;
    show("pareto(1.5)", &draw(&|r| pareto.sample(r), &mut rng));
    let lomax = Pareto::new(1.0, 3.0)?;
    show("pareto(3)", &draw(&|r| lomax.sample(r), &mut rng));

    // A simulated economy where a tenth of the agents are monopolists.
    let settings = RunSettings {
        agents: 2000,
        rounds: 20_000,
        seed: 3,
        snapshots: vec![20_000],
    };
    let params = PairwiseParams {
        monopolist_fraction: 0.1,
        ..PairwiseParams::default()
    };
    let run = run_pairwise(&settings, &params)?;
    show("pairwise, p_m = 0.1", &run.snapshots[0].wealth);
    Ok(())
}
