//! Stochastic simulation of coupled NOPO networks.
//!
//! Three levels of description are provided, each integrated with
//! Euler–Maruyama:
//!
//! - [`simulate_full_network`]: complex signal fields with saturable gain,
//!   mutual injection and isotropic complex white noise;
//! - [`simulate_amplitude_phase`]: the same dynamics written in photon
//!   number and phase;
//! - [`simulate_kuramoto`]: phases only, valid when the photon numbers relax
//!   much faster than the injection (`γ_s ≫ γ_inj`). Its stationary law is
//!   the Gibbs distribution of the XY model at `β = γ_inj / D_θ`.
//!
//! Trajectories are sampled at caller-chosen times; [`ensemble_run`] fans out
//! independent trajectories with per-trajectory counter-based RNG streams so
//! results do not depend on thread count.

mod ensemble;
mod field;
mod kuramoto;
mod record;
mod split;

pub use ensemble::{ensemble_map, ensemble_run, trajectory_rng, InitialState, RunSpec, Simulator};
pub use field::{simulate_full_network, simulate_full_network_with_rng, NetworkParams};
pub use kuramoto::{simulate_kuramoto, simulate_kuramoto_with_rng, KuramotoParams};
pub use record::TrajectoryRecord;
pub use split::{simulate_amplitude_phase, simulate_amplitude_phase_with_rng, MAX_HALVINGS};

use crate::{Error, Result};

/// Stability bound shared by the stochastic integrators: `dt · rate < 0.1`.
pub const STABILITY_LIMIT: f64 = 0.1;

/// Target for default step sizes: `dt · fastest rate = 0.01`.
pub const DEFAULT_STEP_FRACTION: f64 = 1e-2;

/// Round-trip time of the reference cavity, 5 μs.
pub const DEFAULT_ROUND_TRIP: f64 = 5e-6;

/// Mutual injection rate realised by delay lines of power transmittance `t`
/// in a cavity with round-trip time `round_trip`: `γ_inj = 2√T / τ_rt`.
pub fn injection_rate_from_transmittance(transmittance: f64, round_trip: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&transmittance) {
        return Err(Error::invalid(
            "transmittance",
            format!("must lie in [0, 1], got {transmittance}"),
        ));
    }
    if !(round_trip > 0.0) || !round_trip.is_finite() {
        return Err(Error::invalid("round_trip", "must be positive and finite"));
    }
    Ok(2.0 * transmittance.sqrt() / round_trip)
}

pub(crate) fn check_rate(dt: f64, name: &'static str, rate: f64) -> Result<()> {
    let product = dt * rate;
    if product >= STABILITY_LIMIT {
        return Err(Error::Unstable {
            rate: name,
            product,
            limit: STABILITY_LIMIT,
        });
    }
    Ok(())
}

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", format!("must be positive and finite, got {dt}")));
    }
    Ok(())
}

/// Splits `[0, t_last]` into segments ending at each sample time; every
/// segment is covered by equal substeps no longer than `dt`.
pub(crate) fn plan_segments(sample_times: &[f64], dt: f64) -> Result<Vec<(usize, f64)>> {
    check_dt(dt)?;
    if sample_times.is_empty() {
        return Err(Error::invalid("sample_times", "must not be empty"));
    }
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(sample_times.len());
    for (i, &t) in sample_times.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::invalid("sample_times", format!("invalid time {t}")));
        }
        if i > 0 && t <= prev {
            return Err(Error::invalid("sample_times", "must be strictly increasing"));
        }
        let span = t - prev;
        let steps = if span > 0.0 {
            // tolerate round-off so that spans that are exact multiples of dt
            // are not split into one extra sliver
            ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
        } else {
            0
        };
        let h = if steps > 0 { span / steps as f64 } else { 0.0 };
        out.push((steps, h));
        prev = t;
    }
    Ok(out)
}

/// FNV-1a over the debug rendering of the generating parameters.
pub(crate) fn digest(repr: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in repr.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transmittance_law() {
        let g = injection_rate_from_transmittance(0.25, DEFAULT_ROUND_TRIP).unwrap();
        assert!((g - 2.0 * 0.5 / 5e-6).abs() < 1e-6);
        assert!(injection_rate_from_transmittance(1.5, 5e-6).is_err());
    }

    #[test]
    fn segments_hit_sample_times() {
        let seg = plan_segments(&[0.0, 1.0, 1.25], 0.1).unwrap();
        assert_eq!(seg[0], (0, 0.0));
        assert_eq!(seg[1].0, 10);
        assert_eq!(seg[2].0, 3);
        assert!((seg[2].1 * 3.0 - 0.25).abs() < 1e-15);
        assert!(plan_segments(&[1.0, 1.0], 0.1).is_err());
        assert!(plan_segments(&[], 0.1).is_err());
        assert!(plan_segments(&[1.0], 0.0).is_err());
    }
}
