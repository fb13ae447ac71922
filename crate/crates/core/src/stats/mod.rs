//! Distribution analysis for simulated wealth samples.

pub mod gamma;
pub mod gini;
pub mod kde;
pub mod ks;
pub mod special;
pub mod tail;

pub use gamma::{fit_gamma_mle, fit_gamma_moments, FitMethod, GammaFit};
pub use gini::{gini_empirical, gini_gamma};
pub use kde::{kde_auto, kde_gaussian, KdeEstimate};
pub use ks::{ks_distance, ks_distance_with};
pub use tail::{tail_diagnostic, TailDiagnostic, TailVerdict};
