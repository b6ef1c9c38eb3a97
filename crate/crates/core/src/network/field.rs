use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_dt, check_rate, digest, plan_segments, KuramotoParams, TrajectoryRecord, DEFAULT_STEP_FRACTION};
use crate::opo::{steady_state_photon_number, OpoParams, SignalGain};
use crate::xy::{CouplingGraph, PhaseConfig};
use crate::{Error, Result};

/// Parameters of a mutually injected NOPO network driven by white noise.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    pub opo: OpoParams,
    /// Mutual injection rate `γ_inj`.
    pub gamma_inj: f64,
    /// Field diffusion coefficient `D` (photons per unit time).
    pub diffusion_d: f64,
    pub graph: CouplingGraph<f64>,
}

impl NetworkParams {
    pub fn new(opo: OpoParams, gamma_inj: f64, diffusion_d: f64, graph: CouplingGraph<f64>) -> Result<Self> {
        let p = Self {
            opo,
            gamma_inj,
            diffusion_d,
            graph,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.opo.validate()?;
        for (name, v) in [("gamma_inj", self.gamma_inj), ("diffusion_d", self.diffusion_d)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
            if v < 0.0 {
                return Err(Error::invalid(name, "must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn steady_state_photon_number(&self) -> Result<f64> {
        steady_state_photon_number(&self.opo)
    }

    /// Phase diffusion `D_θ = D / n^(ss)`.
    pub fn phase_diffusion(&self) -> Result<f64> {
        let nss = self.steady_state_photon_number()?;
        if nss <= 0.0 {
            return Err(Error::invalid("pump_amplitude", "network must be pumped above threshold"));
        }
        Ok(self.diffusion_d / nss)
    }

    /// `γ_s / γ_inj`; the phase-only reduction needs this to be large.
    pub fn time_scale_separation(&self) -> f64 {
        self.opo.gamma_s / self.gamma_inj
    }

    /// The phase-only model these parameters reduce to.
    pub fn kuramoto_reduction(&self) -> Result<KuramotoParams<f64>> {
        KuramotoParams::new(self.gamma_inj, self.phase_diffusion()?, self.graph.clone())
    }

    pub(crate) fn drift_rate(&self) -> f64 {
        self.gamma_inj * self.graph.max_row_weight()
    }

    pub fn default_dt(&self) -> Result<f64> {
        let fastest = self
            .opo
            .gamma_s
            .max(self.drift_rate())
            .max(self.phase_diffusion().unwrap_or(0.0));
        Ok(DEFAULT_STEP_FRACTION / fastest)
    }

    pub(crate) fn check_step(&self, dt: f64) -> Result<()> {
        check_dt(dt)?;
        check_rate(dt, "gamma_s", self.opo.gamma_s)?;
        check_rate(dt, "gamma_inj*max_degree", self.drift_rate())
    }
}

/// Euler–Maruyama integration of the complex-field Langevin equation
///
/// `da_k = [(γ_s/2)((s(|a_k|²/n₀)·r)⁴ − 1) a_k + (γ_inj/2) Σ_l J_kl a_l] dt + √D dξ_k`
///
/// where `dξ_k` has independent real and imaginary Wiener parts, so each
/// quadrature of the field receives variance `D·dt` per step. Records phases
/// and photon numbers at `sample_times`.
pub fn simulate_full_network(
    params: &NetworkParams,
    initial: &[Complex64],
    dt: f64,
    sample_times: &[f64],
    seed: u64,
) -> Result<TrajectoryRecord<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = simulate_full_network_with_rng(params, initial, dt, sample_times, &mut rng)?;
    rec.seed = seed;
    Ok(rec)
}

pub fn simulate_full_network_with_rng<R: Rng + ?Sized>(
    params: &NetworkParams,
    initial: &[Complex64],
    dt: f64,
    sample_times: &[f64],
    rng: &mut R,
) -> Result<TrajectoryRecord<f64>> {
    params.validate()?;
    params.check_step(dt)?;
    let n = params.graph.n_spins();
    if initial.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: initial.len(),
        });
    }
    if initial.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite("initial"));
    }
    let gain = SignalGain::new(&params.opo)?;
    let segments = plan_segments(sample_times, dt)?;

    let mut a = initial.to_vec();
    let mut drift = vec![Complex64::new(0.0, 0.0); n];
    let mut snapshots = Vec::with_capacity(segments.len());
    let mut photons = Vec::with_capacity(segments.len());
    let mut step: u64 = 0;

    for &(steps, h) in &segments {
        let noise = (params.diffusion_d * h).sqrt();
        for _ in 0..steps {
            step += 1;
            for k in 0..n {
                let mut inj = Complex64::new(0.0, 0.0);
                for &(l, w) in params.graph.neighbors(k) {
                    inj += a[l] * w;
                }
                drift[k] = a[k] * (0.5 * gain.gamma_s * gain.net_gain(a[k].norm_sqr()))
                    + inj * (0.5 * params.gamma_inj);
            }
            for k in 0..n {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                a[k] += drift[k] * h + Complex64::new(re, im) * noise;
                if !a[k].is_finite() {
                    return Err(Error::Diverged { step });
                }
            }
        }
        let theta: Vec<f64> = a.iter().map(|z| z.arg()).collect();
        snapshots.push(PhaseConfig::from_raw(&theta));
        photons.push(a.iter().map(|z| z.norm_sqr()).collect());
    }

    Ok(TrajectoryRecord {
        sample_times: sample_times.to_vec(),
        snapshots,
        photon_numbers: Some(photons),
        seed: 0,
        stream: 0,
        params_digest: digest(&format!("full {params:?} dt={dt:e}")),
    })
}
