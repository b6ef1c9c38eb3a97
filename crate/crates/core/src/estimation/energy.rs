use serde::{Deserialize, Serialize};

use super::mean_std;
use crate::network::TrajectoryRecord;
use crate::xy::{xy_energy, CouplingGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    pub mean: f64,
    /// Standard deviation across samples.
    pub std_dev: f64,
    pub n_samples: usize,
    /// `std_dev / √n_samples`.
    pub std_error: f64,
}

/// XY energy of every trajectory's snapshot at `at_time`.
pub fn mean_energy_of_samples(
    ensemble: &[TrajectoryRecord<f64>],
    graph: &CouplingGraph<f64>,
    at_time: f64,
) -> Result<EnergyEstimate> {
    if ensemble.is_empty() {
        return Err(Error::InsufficientData("empty ensemble".into()));
    }
    let energies = ensemble
        .iter()
        .map(|r| Ok(xy_energy(r.snapshot_at(at_time)?, graph)?.value()))
        .collect::<Result<Vec<f64>>>()?;
    let (mean, std_dev, n) = mean_std(energies);
    Ok(EnergyEstimate {
        mean,
        std_dev,
        n_samples: n,
        std_error: std_dev / (n as f64).sqrt(),
    })
}

/// Ring relative phases `θ_{k+1} − θ_k` of every trajectory at `at_time`,
/// concatenated in trajectory order.
pub fn relative_phases_at(ensemble: &[TrajectoryRecord<f64>], at_time: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for r in ensemble {
        out.extend(r.snapshot_at(at_time)?.ring_relative_phases());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonDiagnostics {
    /// Sample standard deviation of `√(n_k/⟨n⟩)`.
    pub delta: f64,
    /// Relative spread `2δ` of the effective couplings `√(n_k n_l)/⟨n⟩ J_kl`.
    pub effective_j_spread: f64,
    /// `γ_inj ⟨n⟩ / D`.
    pub beta_correction: f64,
    pub mean_photon_number: f64,
    pub n_samples: usize,
}

/// Photon-number fluctuation statistics pooled over all snapshots with
/// `t > 0` (all snapshots if none qualify).
pub fn photon_fluctuation_diagnostics(
    ensemble: &[TrajectoryRecord<f64>],
    gamma_inj: f64,
    diffusion_d: f64,
) -> Result<PhotonDiagnostics> {
    let mut pooled = Vec::new();
    for r in ensemble {
        let ph = r.photon_numbers.as_ref().ok_or(Error::NoPhotonData)?;
        let any_late = r.sample_times.iter().any(|&t| t > 0.0);
        for (t, ns) in r.sample_times.iter().zip(ph) {
            if *t > 0.0 || !any_late {
                pooled.extend_from_slice(ns);
            }
        }
    }
    if pooled.is_empty() {
        return Err(Error::NoPhotonData);
    }
    let (mean_n, _, count) = mean_std(pooled.iter().copied());
    if !(mean_n > 0.0) {
        return Err(Error::invalid("photon_numbers", "mean photon number must be positive"));
    }
    let (_, delta, _) = mean_std(pooled.iter().map(|n| (n / mean_n).sqrt()));
    if !(diffusion_d > 0.0) {
        return Err(Error::invalid("diffusion_d", "must be positive"));
    }
    Ok(PhotonDiagnostics {
        delta,
        effective_j_spread: 2.0 * delta,
        beta_correction: gamma_inj * mean_n / diffusion_d,
        mean_photon_number: mean_n,
        n_samples: count,
    })
}
