//! Gaussian kernel density estimation with Silverman's bandwidth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel contributions beyond this many bandwidths are below e^-50 and skipped.
const CUTOFF: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeEstimate {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl KdeEstimate {
    /// Trapezoid-rule integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(g, d)| 0.5 * (g[1] - g[0]) * (d[0] + d[1]))
            .sum()
    }

    /// Grid point with the highest density.
    pub fn mode(&self) -> f64 {
        let (k, _) = self
            .density
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, &d)| if d > best.1 { (k, d) } else { best });
        self.grid[k]
    }

    /// `grid,density` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grid,density\n");
        for (g, d) in self.grid.iter().zip(&self.density) {
            out.push_str(&format!("{g},{d}\n"));
        }
        out
    }
}

/// Linear-interpolation quantile of an ascending sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `0.9 min(σ, IQR/1.34) n^(-1/5)`, falling back to σ when the IQR vanishes.
pub fn silverman_bandwidth(sample: &[f64]) -> Result<f64> {
    if sample.len() < 2 {
        return Err(Error::Domain(format!("KDE needs at least 2 values, got {}", sample.len())));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let sd = (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    let h = 0.9 * spread * n.powf(-0.2);
    if h > 0.0 && h.is_finite() {
        Ok(h)
    } else {
        Err(Error::Domain("zero KDE bandwidth: sample has no spread".into()))
    }
}

/// Evenly spaced grid covering the sample range padded by `pad` on both sides.
pub fn padded_grid(sample: &[f64], pad: f64, points: usize) -> Vec<f64> {
    let lo = sample.iter().copied().fold(f64::INFINITY, f64::min) - pad;
    let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max) + pad;
    linspace(lo, hi, points)
}

pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|k| lo + step * k as f64).collect()
        }
    }
}

/// Gaussian KDE of `sample` evaluated on `grid`.
pub fn kde_gaussian(sample: &[f64], grid: &[f64]) -> Result<KdeEstimate> {
    let h = silverman_bandwidth(sample)?;
    Ok(kde_with_bandwidth(sample, grid, h))
}

pub fn kde_with_bandwidth(sample: &[f64], grid: &[f64], h: f64) -> KdeEstimate {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let norm = 1.0 / (sorted.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let density = grid
        .iter()
        .map(|&g| {
            let start = sorted.partition_point(|&v| v < g - CUTOFF * h);
            let end = sorted.partition_point(|&v| v <= g + CUTOFF * h);
            let sum: f64 = sorted[start..end]
                .iter()
                .map(|&v| {
                    let z = (g - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum();
            sum * norm
        })
        .collect();
    KdeEstimate {
        grid: grid.to_vec(),
        density,
        bandwidth: h,
    }
}

/// KDE on a `points`-point grid spanning the sample range ± 4 bandwidths.
pub fn kde_auto(sample: &[f64], points: usize) -> Result<KdeEstimate> {
    let h = silverman_bandwidth(sample)?;
    let grid = padded_grid(sample, 4.0 * h, points);
    Ok(kde_with_bandwidth(sample, &grid, h))
}
