use nopo_xy::analytics::bessel_ratio_i1_i0;
use nopo_xy::estimation::{
    besselratio_inverse, decay_curve, estimate_beta, fit_diffusion, photon_fluctuation_diagnostics, BetaMethod,
    DecayCurve,
};
use nopo_xy::network::{ensemble_run, InitialState, NetworkParams, RunSpec, Simulator};
use nopo_xy::opo::{steady_state_photon_number, OpoParams};
use nopo_xy::stats::sample_von_mises;
use nopo_xy::{CouplingGraph, KuramotoParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn von_mises(beta: f64, m: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| sample_von_mises(beta, &mut rng)).collect()
}

proptest! {
    #[test]
    fn bessel_ratio_inverse_round_trips(beta in 1e-3f64..200.0) {
        let r = bessel_ratio_i1_i0(beta).unwrap();
        prop_assert!((besselratio_inverse(r).unwrap() - beta).abs() < 1e-7 * beta.max(1.0));
    }

    #[test]
    fn diffusion_fit_is_time_scale_covariant(d in 0.1f64..10.0, scale in 0.01f64..100.0) {
        let times: Vec<f64> = (0..8).map(|i| i as f64 * 0.25 / d).collect();
        let curve = |ts: &[f64], rate: f64| DecayCurve {
            times: ts.to_vec(),
            mean_cosine: ts.iter().map(|t| (-rate * t).exp()).collect(),
            n_samples: vec![1000; ts.len()],
            std_error: vec![1e-3; ts.len()],
        };
        let base = fit_diffusion(&curve(&times, d)).unwrap().d_theta;
        let scaled: Vec<f64> = times.iter().map(|t| t * scale).collect();
        let other = fit_diffusion(&curve(&scaled, d / scale)).unwrap().d_theta;
        prop_assert!((base - d).abs() < 1e-9 * d);
        prop_assert!((other * scale - base).abs() < 1e-9 * base);
    }
}

#[test]
fn mle_error_shrinks_like_inverse_root_sample_size() {
    for beta in [1.0, 10.0] {
        let mut ses = Vec::new();
        for (i, m) in [1_000usize, 10_000, 100_000].into_iter().enumerate() {
            let e = estimate_beta(&von_mises(beta, m, 40 + i as u64), BetaMethod::Mle).unwrap();
            assert!((e.beta_eff - beta).abs() < 3.0 * e.std_error, "β={beta} M={m}: {e:?}");
            ses.push(e.std_error);
        }
        for w in ses.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 10f64.sqrt()).abs() < 0.5, "SE ratio {ratio}");
        }
    }
}

#[test]
fn histogram_fit_agrees_with_mle() {
    for beta in [0.5, 2.8, 15.0] {
        let xs = von_mises(beta, 50_000, 7);
        let mle = estimate_beta(&xs, BetaMethod::Mle).unwrap();
        let fit = estimate_beta(&xs, BetaMethod::HistogramFit).unwrap();
        let se = mle.std_error.hypot(fit.std_error);
        assert!((mle.beta_eff - fit.beta_eff).abs() < 3.0 * se, "β={beta}: {mle:?} {fit:?}");
    }
}

#[test]
fn uniform_samples_give_near_zero_beta() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xs: Vec<f64> = (0..20_000)
        .map(|_| rand::Rng::random_range(&mut rng, -std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    let e = estimate_beta(&xs, BetaMethod::Mle).unwrap();
    assert!(e.beta_eff < 3.0 * e.std_error, "{e:?}");
}

#[test]
fn decay_curve_follows_pure_diffusion() {
    let d = 2.0;
    let spec = RunSpec {
        simulator: Simulator::Kuramoto(KuramotoParams::new(0.0, d, CouplingGraph::uncoupled(128).unwrap()).unwrap()),
        initial: InitialState::UniformRandom,
        dt: 1e-3,
        sample_times: (0..=6).map(|i| i as f64 * 0.1).collect(),
        n_trajectories: 60,
        master_seed: 9,
    };
    let curve = decay_curve(&ensemble_run(&spec).unwrap()).unwrap();
    for ((t, c), se) in curve.times.iter().zip(&curve.mean_cosine).zip(&curve.std_error) {
        let want = (-d * t).exp();
        assert!((c - want).abs() < 4.0 * se.max(1e-12), "t={t}: {c} vs {want} ± {se}");
    }
    let fit = fit_diffusion(&curve).unwrap();
    assert!((fit.d_theta - d).abs() < 0.05 * d);
}

#[test]
fn photon_diagnostics_on_split_run() {
    let n = 8;
    let opo = OpoParams::with_pump_ratio(1e3, 1e5, 1e5, 1.0, 2.0).unwrap();
    let nss = steady_state_photon_number(&opo).unwrap();
    let d = nss / 2.0;
    let net = NetworkParams::new(opo, 1.0, d, CouplingGraph::ring(n, 1.0).unwrap()).unwrap();
    let spec = RunSpec {
        simulator: Simulator::AmplitudePhase(net),
        initial: InitialState::UniformRandom,
        dt: 5e-5,
        sample_times: vec![0.5, 1.0, 1.5, 2.0],
        n_trajectories: 8,
        master_seed: 4,
    };
    let diag = photon_fluctuation_diagnostics(&ensemble_run(&spec).unwrap(), 1.0, d).unwrap();
    assert!((diag.mean_photon_number / nss - 1.0).abs() < 0.05, "{diag:?}");
    assert!(diag.delta > 0.0 && diag.delta < 0.2, "{diag:?}");
    assert!((diag.effective_j_spread - 2.0 * diag.delta).abs() < 1e-15);
    assert!((diag.beta_correction / 2.0 - 1.0).abs() < 0.05);
}
