//! Overlay density curves in a deterministic SVG chart.
//!
//! ```text
//! cargo run --example plot_densities -- [out.svg]
//! ```

use statrs::distribution::{Continuous, Gamma};

use wealthsim::plot::{render_svg, ChartLabels, Series};
use wealthsim::runner::write_atomic;
use wealthsim::stats::kde::linspace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "gamma_densities.svg".into());
    let grid = linspace(0.02, 6.0, 300);
    let series: Vec<Series> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&shape| {
            // Rate equal to shape gives unit mean.
            let law = Gamma::new(shape, shape)?;
            let density = grid.iter().map(|&x| law.pdf(x)).collect();
            Ok(Series::new(format!("shape={shape}"), grid.clone(), density))
        })
        .collect::<Result<_, statrs::distribution::GammaError>>()?;
    let labels = ChartLabels {
        title: "Unit-mean Gamma densities".into(),
        ..ChartLabels::default()
    };
    let svg = render_svg(&series, &labels)?;
    write_atomic(out.as_ref(), svg.as_bytes())?;
    println!("wrote {out} ({} bytes)", svg.len());
    Ok(())
}
