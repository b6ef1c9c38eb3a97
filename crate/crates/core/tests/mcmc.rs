use nopo_xy::analytics::{mean_energy_exact, RingSpec, DEFAULT_N_MAX};
use nopo_xy::mcmc::{
    metropolis_sweep, sample_chain, sample_chains, ChainStart, McmcConfig, SweepOrder,
};
use nopo_xy::stats::ks_two_sample;
use nopo_xy::xy::xy_energy;
use nopo_xy::{CouplingGraph, PhaseConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(beta: f64, width: f64, burn_in: usize, samples: usize, thin: usize, seed: u64) -> McmcConfig<f64> {
    McmcConfig {
        beta,
        proposal_width: width,
        n_sweeps: burn_in + samples * thin,
        burn_in,
        thin,
        seed,
        adapt: false,
        order: SweepOrder::Sequential,
        start: ChainStart::Aligned,
    }
}

#[test]
fn two_spin_chain_samples_the_von_mises_difference() {
    // H = −cos(θ₀ − θ₁) on two spins: the difference is von Mises(β)
    let beta = 1.5;
    let graph = CouplingGraph::chain(2, 1.0).unwrap();
    let chains = sample_chains(&config(beta, 2.0, 200, 20_000, 2, 1), &graph, 4).unwrap();
    let diffs: Vec<f64> = chains
        .iter()
        .flat_map(|c| c.samples.iter().map(|s| s.ring_relative_phases()[0]))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let reference: Vec<f64> = (0..diffs.len())
        .map(|_| nopo_xy::stats::sample_von_mises(beta, &mut rng))
        .collect();
    let ks = ks_two_sample(&diffs, &reference).unwrap();
    assert!(ks.p_value > 1e-3, "{ks:?}");
}

#[test]
fn sweep_orders_agree() {
    let graph = CouplingGraph::ring(16, 1.0).unwrap();
    let phases = |order| {
        let cfg = McmcConfig {
            order,
            ..config(2.0, 1.5, 500, 4000, 5, 3)
        };
        sample_chain(&cfg, &graph)
            .unwrap()
            .samples
            .iter()
            .flat_map(|s| s.ring_relative_phases())
            .collect::<Vec<f64>>()
    };
    let ks = ks_two_sample(&phases(SweepOrder::Sequential), &phases(SweepOrder::Random)).unwrap();
    assert!(!ks.rejects_at(0.001), "{ks:?}");
}

#[test]
fn acceptance_falls_with_width() {
    let graph = CouplingGraph::ring(64, 1.0).unwrap();
    let rates: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 3.0]
        .iter()
        .map(|&w| sample_chain(&config(3.0, w, 100, 200, 1, 5), &graph).unwrap().acceptance_rate)
        .collect();
    for w in rates.windows(2) {
        assert!(w[1] < w[0], "{rates:?}");
    }
}

#[test]
fn zero_beta_accepts_everything() {
    let graph = CouplingGraph::ring(10, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let start = PhaseConfig::uniform_random(10, &mut rng).unwrap();
    let (_, rate) = metropolis_sweep(&start, &graph, &config(0.0, 3.0, 0, 1, 1, 0), &mut rng).unwrap();
    assert_eq!(rate, 1.0);
}

#[test]
fn adaptive_width_tunes_acceptance_at_low_temperature() {
    let graph = CouplingGraph::ring(64, 1.0).unwrap();
    let cfg = McmcConfig {
        adapt: true,
        ..config(31.0, 2.0, 2000, 200, 5, 8)
    };
    let chain = sample_chain(&cfg, &graph).unwrap();
    assert!((0.3..=0.6).contains(&chain.acceptance_rate), "{}", chain.acceptance_rate);
}

#[test]
fn ring_energy_matches_transfer_matrix() {
    let n = 256;
    let beta = 5.0;
    let graph = CouplingGraph::ring(n, 1.0).unwrap();
    let cfg = McmcConfig {
        adapt: true,
        ..config(beta, 1.0, 2000, 250, 20, 11)
    };
    let energies: Vec<f64> = sample_chains(&cfg, &graph, 4)
        .unwrap()
        .iter()
        .flat_map(|c| c.samples.iter().map(|s| xy_energy(s, &graph).unwrap().value()))
        .collect();
    let m = energies.len() as f64;
    let mean = energies.iter().sum::<f64>() / m;
    let var = energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let want = mean_energy_exact(&RingSpec::new(n, beta).unwrap(), DEFAULT_N_MAX).unwrap();
    assert!((mean - want).abs() < 3.0 * (var / m).sqrt() + 1e-9, "{mean} vs {want}");
}

#[test]
fn chains_are_reproducible() {
    let graph = CouplingGraph::ring(12, 1.0).unwrap();
    let cfg = config(1.0, 1.0, 10, 20, 2, 77);
    assert_eq!(sample_chains(&cfg, &graph, 3).unwrap(), sample_chains(&cfg, &graph, 3).unwrap());
}
