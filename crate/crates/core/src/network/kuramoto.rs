use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_dt, check_rate, digest, plan_segments, TrajectoryRecord, DEFAULT_STEP_FRACTION};
use crate::xy::{CouplingGraph, PhaseConfig};
use crate::{Error, Result, Scalar};

/// Phase-only network: `dθ_k = −(γ_inj/2) ∂H/∂θ_k dt + √D_θ dW_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KuramotoParams<T> {
    pub gamma_inj: T,
    pub d_theta: T,
    pub graph: CouplingGraph<T>,
}

impl<T: Scalar> KuramotoParams<T> {
    pub fn new(gamma_inj: T, d_theta: T, graph: CouplingGraph<T>) -> Result<Self> {
        let p = Self {
            gamma_inj,
            d_theta,
            graph,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters realising inverse temperature `beta` at fixed injection rate.
    pub fn from_beta(gamma_inj: T, beta: T, graph: CouplingGraph<T>) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::invalid("beta", "must be positive and finite"));
        }
        Self::new(gamma_inj, gamma_inj / beta, graph)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma_inj", self.gamma_inj), ("d_theta", self.d_theta)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
            if v < T::zero() {
                return Err(Error::invalid(name, "must be non-negative"));
            }
        }
        Ok(())
    }

    /// `β = γ_inj / D_θ`, undefined without noise.
    pub fn beta_set(&self) -> Option<T> {
        (self.d_theta > T::zero()).then(|| self.gamma_inj / self.d_theta)
    }

    fn drift_rate(&self) -> f64 {
        self.gamma_inj.as_f64() * self.graph.max_row_weight().as_f64()
    }

    /// Step with `dt · max(γ_inj·deg, D_θ) = 0.01`; `None` when both rates vanish.
    pub fn default_dt(&self) -> Option<f64> {
        let fastest = self.drift_rate().max(self.d_theta.as_f64());
        (fastest > 0.0).then(|| DEFAULT_STEP_FRACTION / fastest)
    }

    fn check_step(&self, dt: f64) -> Result<()> {
        check_dt(dt)?;
        check_rate(dt, "gamma_inj*max_degree", self.drift_rate())?;
        check_rate(dt, "d_theta", self.d_theta.as_f64())
    }
}

/// Fills `grad` with `∂H/∂θ` using one `sin_cos` per spin.
pub(crate) fn xy_gradient_fast<T: Scalar>(
    theta: &[T],
    graph: &CouplingGraph<T>,
    sin: &mut [T],
    cos: &mut [T],
    grad: &mut [T],
) {
    for k in 0..theta.len() {
        let (s, c) = theta[k].sin_cos();
        sin[k] = s;
        cos[k] = c;
        grad[k] = T::zero();
    }
    for e in graph.edges() {
        let f = e.weight * (sin[e.a] * cos[e.b] - cos[e.a] * sin[e.b]);
        grad[e.a] = grad[e.a] + f;
        grad[e.b] = grad[e.b] - f;
    }
}

/// Euler–Maruyama integration of the noisy Kuramoto model with a seeded
/// ChaCha stream. Phases are reported wrapped into `[−π, π)`.
pub fn simulate_kuramoto<T: Scalar>(
    params: &KuramotoParams<T>,
    initial: &PhaseConfig<T>,
    dt: f64,
    sample_times: &[f64],
    seed: u64,
) -> Result<TrajectoryRecord<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = simulate_kuramoto_with_rng(params, initial, dt, sample_times, &mut rng)?;
    rec.seed = seed;
    Ok(rec)
}

/// As [`simulate_kuramoto`], drawing noise from `rng`.
pub fn simulate_kuramoto_with_rng<T: Scalar, R: Rng + ?Sized>(
    params: &KuramotoParams<T>,
    initial: &PhaseConfig<T>,
    dt: f64,
    sample_times: &[f64],
    rng: &mut R,
) -> Result<TrajectoryRecord<T>> {
    params.validate()?;
    params.check_step(dt)?;
    let n = params.graph.n_spins();
    if initial.n_spins() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: initial.n_spins(),
        });
    }
    let segments = plan_segments(sample_times, dt)?;

    let half_gamma = params.gamma_inj * T::of(0.5);
    let mut theta = initial.as_slice().to_vec();
    let mut sin = vec![T::zero(); n];
    let mut cos = vec![T::zero(); n];
    let mut grad = vec![T::zero(); n];
    let mut snapshots = Vec::with_capacity(segments.len());

    for &(steps, h) in &segments {
        let h_t = T::of(h);
        let noise = (params.d_theta * h_t).sqrt();
        let coupled = params.gamma_inj > T::zero() && !params.graph.edges().is_empty();
        for _ in 0..steps {
            if coupled {
                xy_gradient_fast(&theta, &params.graph, &mut sin, &mut cos, &mut grad);
                for k in 0..n {
                    theta[k] = theta[k] - half_gamma * grad[k] * h_t + noise * T::sample_normal(rng);
                }
            } else {
                for th in theta.iter_mut() {
                    *th = *th + noise * T::sample_normal(rng);
                }
            }
        }
        // keep the raw angles bounded; trig is 2π-periodic so this only
        // affects rounding
        for th in theta.iter_mut() {
            *th = crate::xy::wrap_unchecked(*th);
        }
        snapshots.push(PhaseConfig::from_raw(&theta));
    }

    Ok(TrajectoryRecord {
        sample_times: sample_times.to_vec(),
        snapshots,
        photon_numbers: None,
        seed: 0,
        stream: 0,
        params_digest: digest(&format!("kuramoto {params:?} dt={dt:e}")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xy::xy_energy;
    use rand::SeedableRng;

    #[test]
    fn noiseless_aligned_state_is_stationary() {
        let g = CouplingGraph::ring(16, 1.0f64).unwrap();
        let p = KuramotoParams::new(2.0, 0.0, g).unwrap();
        let init = PhaseConfig::aligned(16, 0.4).unwrap();
        let rec = simulate_kuramoto(&p, &init, 1e-3, &[0.5, 1.0], 3).unwrap();
        for s in &rec.snapshots {
            assert_eq!(s, &init);
        }
    }

    #[test]
    fn noiseless_flow_relaxes_monotonically() {
        let g = CouplingGraph::ring(12, 1.0f64).unwrap();
        let p = KuramotoParams::new(1.0, 0.0, g.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let init = PhaseConfig::new(
            (0..12).map(|_| 0.3 * (f64::sample_unit(&mut rng) - 0.5)).collect(),
        )
        .unwrap();
        let times: Vec<f64> = (1..=40).map(|i| i as f64 * 0.25).collect();
        let rec = simulate_kuramoto(&p, &init, 1e-3, &times, 0).unwrap();
        let mut prev = xy_energy(&init, &g).unwrap().value();
        for s in &rec.snapshots {
            let e = xy_energy(s, &g).unwrap().value();
            assert!(e <= prev + 1e-12);
            prev = e;
        }
        assert!(prev + 12.0 < 1e-3);
    }

    #[test]
    fn step_size_is_checked() {
        let g = CouplingGraph::ring(4, 1.0f64).unwrap();
        let p = KuramotoParams::new(100.0, 1.0, g).unwrap();
        let init = PhaseConfig::aligned(4, 0.0).unwrap();
        let err = simulate_kuramoto(&p, &init, 1e-3, &[1.0], 0).unwrap_err();
        assert!(matches!(err, Error::Unstable { rate: "gamma_inj*max_degree", .. }));
        let p = KuramotoParams::new(0.0, 200.0, CouplingGraph::ring(4, 1.0).unwrap()).unwrap();
        let err = simulate_kuramoto(&p, &init, 1e-3, &[1.0], 0).unwrap_err();
        assert!(matches!(err, Error::Unstable { rate: "d_theta", .. }));
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = CouplingGraph::ring(8, 1.0f32).unwrap();
        let p = KuramotoParams::from_beta(1.0f32, 2.0, g).unwrap();
        let init = PhaseConfig::aligned(8, 0.0f32).unwrap();
        let a = simulate_kuramoto(&p, &init, 1e-2, &[1.0, 2.0], 9).unwrap();
        let b = simulate_kuramoto(&p, &init, 1e-2, &[1.0, 2.0], 9).unwrap();
        let c = simulate_kuramoto(&p, &init, 1e-2, &[1.0, 2.0], 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.snapshots, c.snapshots);
        assert_eq!(p.beta_set(), Some(2.0));
    }

    #[test]
    fn default_dt_rule() {
        let g = CouplingGraph::ring(8, 1.0f64).unwrap();
        let p = KuramotoParams::new(13.6e3, 0.44e3, g).unwrap();
        let dt = p.default_dt().unwrap();
        assert!((dt * 2.0 * 13.6e3 - 0.01).abs() < 1e-12);
    }
}
