use crate::xy::PhaseConfig;
use crate::{Error, Result, Scalar};

/// Time-stamped phase snapshots from one stochastic run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    /// Acquisition times, seconds, strictly increasing.
    pub sample_times: Vec<f64>,
    pub snapshots: Vec<PhaseConfig<T>>,
    /// Photon numbers per snapshot; only the field-level simulators fill this.
    pub photon_numbers: Option<Vec<Vec<T>>>,
    pub seed: u64,
    /// RNG stream within `seed` (the trajectory index in an ensemble).
    pub stream: u64,
    pub params_digest: String,
}

impl<T: Scalar> TrajectoryRecord<T> {
    pub fn len(&self) -> usize {
        self.sample_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_times.is_empty()
    }

    pub fn n_spins(&self) -> usize {
        self.snapshots.first().map_or(0, |s| s.n_spins())
    }

    /// Index of the snapshot taken at `t` (relative tolerance 1e-9).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1e-12);
        self.sample_times.iter().position(|&s| (s - t).abs() <= tol)
    }

    pub fn snapshot_at(&self, t: f64) -> Result<&PhaseConfig<T>> {
        self.index_of(t)
            .map(|i| &self.snapshots[i])
            .ok_or(Error::MissingSnapshot(t))
    }

    pub fn photon_numbers_at(&self, t: f64) -> Result<&[T]> {
        let photons = self.photon_numbers.as_ref().ok_or(Error::NoPhotonData)?;
        let i = self.index_of(t).ok_or(Error::MissingSnapshot(t))?;
        Ok(&photons[i])
    }
}
