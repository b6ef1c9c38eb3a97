use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    simulate_amplitude_phase_with_rng, simulate_full_network_with_rng, simulate_kuramoto_with_rng, KuramotoParams,
    NetworkParams, TrajectoryRecord,
};
use crate::mcmc::sample_ring_equilibrium;
use crate::xy::{CouplingGraph, PhaseConfig};
use crate::{Error, Result};

/// RNG for trajectory `index` of an ensemble: the master seed selects the
/// key and the index selects an independent ChaCha stream.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Runs `f(index, rng)` for every trajectory in parallel and returns the
/// results in index order. The output does not depend on the thread count.
pub fn ensemble_map<U, F>(n_trajectories: usize, master_seed: u64, f: F) -> Result<Vec<U>>
where
    U: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<U> + Sync,
{
    (0..n_trajectories)
        .into_par_iter()
        .map(|i| {
            let mut rng = trajectory_rng(master_seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}

/// Which equations of motion to integrate.
#[derive(Debug, Clone)]
pub enum Simulator {
    Kuramoto(KuramotoParams<f64>),
    AmplitudePhase(NetworkParams),
    Full(NetworkParams),
}

impl Simulator {
    pub fn n_spins(&self) -> usize {
        match self {
            Simulator::Kuramoto(p) => p.graph.n_spins(),
            Simulator::AmplitudePhase(p) | Simulator::Full(p) => p.graph.n_spins(),
        }
    }

    pub fn default_dt(&self) -> Result<f64> {
        match self {
            Simulator::Kuramoto(p) => p
                .default_dt()
                .ok_or_else(|| Error::invalid("dt", "no rate sets a time scale; give dt explicitly")),
            Simulator::AmplitudePhase(p) | Simulator::Full(p) => p.default_dt(),
        }
    }
}

/// Initial phases. Field-level simulators start every oscillator at its
/// steady-state photon number.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    UniformRandom,
    Aligned(f64),
    Phases(PhaseConfig<f64>),
    /// An exact Gibbs draw for the uniform ring at the given `β`; only
    /// valid when the coupling graph is `ring(N, 1)`.
    RingEquilibrium(f64),
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub simulator: Simulator,
    pub initial: InitialState,
    pub dt: f64,
    pub sample_times: Vec<f64>,
    pub n_trajectories: usize,
    pub master_seed: u64,
}

/// Integrates `spec.n_trajectories` independent trajectories.
pub fn ensemble_run(spec: &RunSpec) -> Result<Vec<TrajectoryRecord<f64>>> {
    if spec.n_trajectories == 0 {
        return Err(Error::invalid("n_trajectories", "must be at least 1"));
    }
    let n = spec.simulator.n_spins();
    if let InitialState::Phases(p) = &spec.initial {
        if p.n_spins() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.n_spins(),
            });
        }
    }
    if let InitialState::RingEquilibrium(_) = &spec.initial {
        let graph = match &spec.simulator {
            Simulator::Kuramoto(p) => &p.graph,
            Simulator::AmplitudePhase(p) | Simulator::Full(p) => &p.graph,
        };
        if n < 3 || *graph != CouplingGraph::ring(n, 1.0)? {
            return Err(Error::invalid("initial", "ring equilibrium start needs a ring(N, 1) graph"));
        }
    }
    let nss = match &spec.simulator {
        Simulator::Kuramoto(_) => 0.0,
        Simulator::AmplitudePhase(p) | Simulator::Full(p) => {
            let nss = p.steady_state_photon_number()?;
            if nss <= 0.0 {
                return Err(Error::invalid("pump_amplitude", "network must be pumped above threshold"));
            }
            nss
        }
    };
    ensemble_map(spec.n_trajectories, spec.master_seed, |i, rng| {
        let init = match &spec.initial {
            InitialState::UniformRandom => PhaseConfig::uniform_random(n, rng)?,
            InitialState::Aligned(a) => PhaseConfig::aligned(n, *a)?,
            InitialState::Phases(p) => p.clone(),
            InitialState::RingEquilibrium(beta) => sample_ring_equilibrium(n, *beta, rng)?,
        };
        let mut rec = match &spec.simulator {
            Simulator::Kuramoto(p) => simulate_kuramoto_with_rng(p, &init, spec.dt, &spec.sample_times, rng)?,
            Simulator::AmplitudePhase(p) => {
                simulate_amplitude_phase_with_rng(p, &vec![nss; n], &init, spec.dt, &spec.sample_times, rng)?
            }
            Simulator::Full(p) => {
                let a: Vec<Complex64> = init
                    .as_slice()
                    .iter()
                    .map(|&th| Complex64::from_polar(nss.sqrt(), th))
                    .collect();
                simulate_full_network_with_rng(p, &a, spec.dt, &spec.sample_times, rng)?
            }
        };
        rec.seed = spec.master_seed;
        rec.stream = i as u64;
        Ok(rec)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n_traj: usize) -> RunSpec {
        let p = KuramotoParams::from_beta(1.0, 2.0, CouplingGraph::ring(5, 1.0).unwrap()).unwrap();
        RunSpec {
            simulator: Simulator::Kuramoto(p),
            initial: InitialState::UniformRandom,
            dt: 0.01,
            sample_times: vec![0.0, 0.5, 1.0],
            n_trajectories: n_traj,
            master_seed: 99,
        }
    }

    #[test]
    fn streams_are_independent_of_ensemble_size() {
        let a = ensemble_run(&spec(3)).unwrap();
        let b = ensemble_run(&spec(6)).unwrap();
        assert_eq!(a[..], b[..3]);
        assert_ne!(a[0].snapshots, a[1].snapshots);
        assert_eq!(a[2].stream, 2);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| ensemble_run(&spec(8)).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}
