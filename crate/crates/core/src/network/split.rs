use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{digest, plan_segments, NetworkParams, TrajectoryRecord};
use crate::opo::SignalGain;
use crate::xy::PhaseConfig;
use crate::{Error, Result};

/// Maximum number of step halvings when a photon number would go non-positive.
pub const MAX_HALVINGS: u32 = 10;

struct SplitState {
    n: Vec<f64>,
    theta: Vec<f64>,
}

struct Stepper<'a> {
    params: &'a NetworkParams,
    gain: SignalGain,
    dn: Vec<f64>,
    dtheta: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    sqrt_n: Vec<f64>,
}

impl Stepper<'_> {
    /// One Euler–Maruyama step of size `h`; `Err(k)` names the first
    /// oscillator whose photon number would become non-positive, in which
    /// case `state` is left untouched.
    fn try_step<R: Rng + ?Sized>(&mut self, state: &mut SplitState, h: f64, rng: &mut R) -> std::result::Result<(), usize> {
        let p = self.params;
        let d = p.diffusion_d;
        let m = state.n.len();
        for k in 0..m {
            let (s, c) = state.theta[k].sin_cos();
            self.sin[k] = s;
            self.cos[k] = c;
            self.sqrt_n[k] = state.n[k].sqrt();
        }
        for k in 0..m {
            let nk = state.n[k];
            let mut amp = 0.0;
            let mut tor = 0.0;
            for &(l, w) in p.graph.neighbors(k) {
                let cos_kl = self.cos[k] * self.cos[l] + self.sin[k] * self.sin[l];
                let sin_kl = self.sin[k] * self.cos[l] - self.cos[k] * self.sin[l];
                amp += w * self.sqrt_n[l] * cos_kl;
                tor += w * self.sqrt_n[l] * sin_kl;
            }
            let zn: f64 = StandardNormal.sample(rng);
            let zt: f64 = StandardNormal.sample(rng);
            let drift_n = self.gain.gamma_s * self.gain.net_gain(nk) * nk
                + p.gamma_inj * self.sqrt_n[k] * amp
                + 2.0 * d;
            self.dn[k] = drift_n * h + 2.0 * (d * nk * h).sqrt() * zn;
            self.dtheta[k] = -0.5 * p.gamma_inj * tor / self.sqrt_n[k] * h + (d * h / nk).sqrt() * zt;
        }
        if let Some(k) = (0..m).find(|&k| !(state.n[k] + self.dn[k] > 0.0)) {
            return Err(k);
        }
        for k in 0..m {
            state.n[k] += self.dn[k];
            state.theta[k] += self.dtheta[k];
        }
        Ok(())
    }

    fn advance<R: Rng + ?Sized>(
        &mut self,
        state: &mut SplitState,
        h: f64,
        depth: u32,
        step: u64,
        rng: &mut R,
    ) -> Result<()> {
        match self.try_step(state, h, rng) {
            Ok(()) => Ok(()),
            Err(index) if depth >= MAX_HALVINGS => Err(Error::PhotonFloor {
                index,
                step,
                halvings: depth,
            }),
            Err(_) => {
                self.advance(state, 0.5 * h, depth + 1, step, rng)?;
                self.advance(state, 0.5 * h, depth + 1, step, rng)
            }
        }
    }
}

/// Euler–Maruyama integration of the network in photon-number/phase form:
///
/// `dn_k = [γ_s((s(n_k/n₀)·r)⁴ − 1) n_k + γ_inj Σ_l J_kl √(n_k n_l) cos(θ_k − θ_l) + 2D] dt + 2√(D n_k) dW_k^n`
///
/// `dθ_k = −(γ_inj/2) Σ_l J_kl √(n_l/n_k) sin(θ_k − θ_l) dt + √(D/n_k) dW_k^θ`
///
/// A step that would drive any `n_k ≤ 0` is discarded and covered by two
/// half steps instead, recursively up to [`MAX_HALVINGS`] times.
pub fn simulate_amplitude_phase(
    params: &NetworkParams,
    initial_n: &[f64],
    initial_theta: &PhaseConfig<f64>,
    dt: f64,
    sample_times: &[f64],
    seed: u64,
) -> Result<TrajectoryRecord<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = simulate_amplitude_phase_with_rng(params, initial_n, initial_theta, dt, sample_times, &mut rng)?;
    rec.seed = seed;
    Ok(rec)
}

pub fn simulate_amplitude_phase_with_rng<R: Rng + ?Sized>(
    params: &NetworkParams,
    initial_n: &[f64],
    initial_theta: &PhaseConfig<f64>,
    dt: f64,
    sample_times: &[f64],
    rng: &mut R,
) -> Result<TrajectoryRecord<f64>> {
    params.validate()?;
    params.check_step(dt)?;
    let m = params.graph.n_spins();
    for len in [initial_n.len(), initial_theta.n_spins()] {
        if len != m {
            return Err(Error::DimensionMismatch { expected: m, got: len });
        }
    }
    if initial_n.iter().any(|&n| !(n > 0.0) || !n.is_finite()) {
        return Err(Error::invalid("initial_n", "photon numbers must be positive and finite"));
    }
    let segments = plan_segments(sample_times, dt)?;
    let mut stepper = Stepper {
        params,
        gain: SignalGain::new(&params.opo)?,
        dn: vec![0.0; m],
        dtheta: vec![0.0; m],
        cos: vec![0.0; m],
        sin: vec![0.0; m],
        sqrt_n: vec![0.0; m],
    };
    let mut state = SplitState {
        n: initial_n.to_vec(),
        theta: initial_theta.as_slice().to_vec(),
    };
    let mut snapshots = Vec::with_capacity(segments.len());
    let mut photons = Vec::with_capacity(segments.len());
    let mut step: u64 = 0;

    for &(steps, h) in &segments {
        for _ in 0..steps {
            step += 1;
            stepper.advance(&mut state, h, 0, step, rng)?;
            if state.n.iter().chain(&state.theta).any(|x| !x.is_finite()) {
                return Err(Error::Diverged { step });
            }
        }
        snapshots.push(PhaseConfig::from_raw(&state.theta));
        photons.push(state.n.clone());
    }

    Ok(TrajectoryRecord {
        sample_times: sample_times.to_vec(),
        snapshots,
        photon_numbers: Some(photons),
        seed: 0,
        stream: 0,
        params_digest: digest(&format!("split {params:?} dt={dt:e}")),
    })
}
