//! Estimators applied to simulated (or measured) phase samples.
//!
//! Snapshots are treated as independent samples; no autocorrelation or
//! effective-sample-size correction is applied.

mod beta;
mod diffusion;
mod energy;

pub use beta::{besselratio_inverse, estimate_beta, BetaEstimate, BetaMethod, HISTOGRAM_BINS};
pub use diffusion::{decay_curve, fit_diffusion, DecayCurve, DiffusionFit, FIT_FLOOR};
pub use energy::{
    mean_energy_of_samples, photon_fluctuation_diagnostics, relative_phases_at, EnergyEstimate,
    PhotonDiagnostics,
};

/// Sample mean and (n − 1)-normalised standard deviation.
pub(crate) fn mean_std(xs: impl IntoIterator<Item = f64>) -> (f64, f64, usize) {
    let mut n = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for x in xs {
        n += 1;
        let d = x - mean;
        mean += d / n as f64;
        m2 += d * (x - mean);
    }
    let sd = if n > 1 { (m2 / (n - 1) as f64).sqrt() } else { 0.0 };
    (mean, sd, n)
}
