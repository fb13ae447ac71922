//! Gini coefficients, Gamma fits, KDE and KS distance on synthetic samples.
//!
//! ```text
//! cargo run --release --example wealth_statistics
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use wealthsim::stats::{fit_gamma_mle, fit_gamma_moments, gini_empirical, gini_gamma, kde_auto, ks_distance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("Gini of a Gamma law by shape:");
    for shape in [0.25, 0.5, 1.0, 2.0, 5.0, 10.0] {
        println!("  shape {shape:>5}: {:.6}", gini_gamma(shape)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    println!();
    println!("{:>6} {:>9} {:>9} {:>9} {:>9} {:>8} {:>8}", "shape", "mle k", "mle s", "mom k", "gini", "ks", "mode");
    for shape in [0.5, 1.0, 2.0, 5.0] {
        let law = Gamma::new(shape, 2.0)?;
        let sample: Vec<f64> = (0..100_000).map(|_| law.sample(&mut rng)).collect();
        let mle = fit_gamma_mle(&sample)?;
        let mom = fit_gamma_moments(&sample)?;
        let kde = kde_auto(&sample, 512)?;
        println!(
            "{shape:>6} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>8.4} {:>8.3}",
            mle.shape,
            mle.scale,
            mom.shape,
            gini_empirical(&sample)?,
            ks_distance(&sample, &mle),
            kde.mode()
        );
    }
    Ok(())
}
