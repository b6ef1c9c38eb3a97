//! The `validate` and `validate-opo` subcommands: property suites at
//! pinned seeds with a JSON report.

use num_complex::Complex64;
use nopo_xy::analytics::{
    mean_energy_approx, mean_energy_exact, partition_function, quadrature, relative_phase_pdf_exact, RingSpec,
    DEFAULT_N_MAX,
};
use nopo_xy::estimation::{
    besselratio_inverse, decay_curve, estimate_beta, fit_diffusion, relative_phases_at, BetaMethod,
};
use nopo_xy::mcmc::{distribution_distance, sample_chains, ChainStart, DistanceReference, McmcConfig, SweepOrder};
use nopo_xy::network::{ensemble_run, InitialState, KuramotoParams, NetworkParams, RunSpec, Simulator};
use nopo_xy::opo::{
    gain_saturation, integrate_three_field, saturation_photon_number, steady_state_photon_number, OpoParams,
    ThreeFieldState,
};
use nopo_xy::stats::{ks_two_sample, sample_von_mises};
use nopo_xy::xy::CouplingGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const SUITES: &[&str] = &["opo", "reduction", "boltzmann", "analytics", "estimation"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    /// Passes when `value < threshold`.
    fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            passed: value < threshold,
            value,
            threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        Report {
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

pub fn run_suite(name: &str) -> CliResult<Report> {
    match name {
        "opo" => opo_suite(&[1.1, 1.5, 2.0, 5.0], 1e-3),
        "analytics" => analytics_suite(),
        "estimation" => estimation_suite(),
        "boltzmann" => boltzmann_suite(),
        "reduction" => reduction_suite(),
        other => Err(CliError::spec(
            "suite",
            format!("unknown suite `{other}` (expected one of {})", SUITES.join(", ")),
        )),
    }
}

/// Fixed-point identity at each pump ratio, and relaxation of the
/// three-field equations to the adiabatic steady state at `r = 2` with
/// `γ_s/γ_p = γ_s/γ_i = gamma_ratio`.
pub fn opo_suite(ratios: &[f64], gamma_ratio: f64) -> CliResult<Report> {
    if !(gamma_ratio > 0.0 && gamma_ratio <= 1.0) {
        return Err(CliError::spec("gamma-ratio", "must lie in (0, 1]"));
    }
    let mut checks = Vec::new();
    for &r in ratios {
        let p = OpoParams::with_pump_ratio(gamma_ratio, 1.0, 1.0, 1.0, r)?;
        let nss = steady_state_photon_number(&p)?;
        let n0 = saturation_photon_number(&p)?;
        let residual = if r > 1.0 {
            (gain_saturation(nss / n0)? * r - 1.0).abs()
        } else {
            nss
        };
        checks.push(Check::below(format!("fixed_point_r{r}"), residual, 1e-10));
    }
    let p = OpoParams::with_pump_ratio(gamma_ratio, 1.0, 1.0, 1.0, 2.0)?;
    let nss = steady_state_photon_number(&p)?;
    let seed = 1e-2 * nss.sqrt();
    let init = ThreeFieldState {
        a_p: Complex64::new(0.0, 0.0),
        a_s: Complex64::new(seed, 0.0),
        a_i: Complex64::new(seed, 0.0),
    };
    let dt = 0.05;
    let steps = (20.0 / (gamma_ratio * dt)).ceil() as usize;
    let traj = integrate_three_field(init, &p, dt, steps)?;
    let n_final = traj.last().map(|s| s.signal_photon_number()).unwrap_or(0.0);
    checks.push(Check::below("adiabatic_elimination_r2", (n_final / nss - 1.0).abs(), 0.01));
    Ok(Report::new("opo", checks))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn analytics_suite() -> CliResult<Report> {
    let mut checks = Vec::new();
    let m = 512;
    for n in [3usize, 4] {
        for beta in [0.5, 1.0, 2.0] {
            let spec = RingSpec::new(n, beta)?;
            let z = partition_function(&spec, DEFAULT_N_MAX)?.exp();
            let zq = quadrature::partition_function(n, beta, m);
            checks.push(Check::below(format!("partition_function_n{n}_b{beta}"), rel(z, zq), 1e-6));
            let e = mean_energy_exact(&spec, DEFAULT_N_MAX)?;
            let eq = quadrature::mean_energy(n, beta, m);
            checks.push(Check::below(format!("energy_n{n}_b{beta}"), rel(e, eq), 1e-6));
            let gap = [-2.5, -1.0, 0.0, 0.7, 3.0]
                .iter()
                .map(|&t| Ok(rel(relative_phase_pdf_exact(t, &spec, DEFAULT_N_MAX)?, quadrature::relative_phase_pdf(t, n, beta, m))))
                .collect::<CliResult<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            checks.push(Check::below(format!("pdf_n{n}_b{beta}"), gap, 1e-6));
        }
    }
    for beta in [0.5, 1.0, 5.0, 15.0, 31.0] {
        let spec = RingSpec::new(5000, beta)?;
        let d = (mean_energy_exact(&spec, DEFAULT_N_MAX)? - mean_energy_approx(5000, beta)?).abs() / 5000.0;
        checks.push(Check::below(format!("large_n_energy_b{beta}"), d, 1e-10));
    }
    Ok(Report::new("analytics", checks))
}

fn estimation_suite() -> CliResult<Report> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for beta in [1.0, 10.0] {
        let xs: Vec<f64> = (0..10_000).map(|_| sample_von_mises(beta, &mut rng)).collect();
        let e = estimate_beta(&xs, BetaMethod::Mle)?;
        checks.push(Check::below(format!("mle_b{beta}_in_se"), (e.beta_eff - beta).abs() / e.std_error, 3.0));
    }
    let r = nopo_xy::analytics::bessel_ratio_i1_i0(5.7)?;
    checks.push(Check::below("bessel_ratio_inverse", (besselratio_inverse(r)? - 5.7).abs(), 1e-8));

    let d_theta = 1.0;
    let graph = CouplingGraph::uncoupled(100)?;
    let spec = RunSpec {
        simulator: Simulator::Kuramoto(KuramotoParams::new(0.0, d_theta, graph)?),
        initial: InitialState::UniformRandom,
        dt: 0.01,
        sample_times: (0..=10).map(|i| i as f64 * 0.1).collect(),
        n_trajectories: 50,
        master_seed: 23,
    };
    let fit = fit_diffusion(&decay_curve(&ensemble_run(&spec)?)?)?;
    checks.push(Check::below("diffusion_fit_relative_error", rel(fit.d_theta, d_theta), 0.05));
    Ok(Report::new("estimation", checks))
}

fn boltzmann_suite() -> CliResult<Report> {
    let mut checks = Vec::new();
    let n = 64;
    // the TV noise floor of two 36-bin histograms is ~0.01 at 10⁵ samples
    // each for broad distributions, so both sides are sampled more densely
    let target: usize = 200_000;
    let oracle: usize = 1_000_000;
    let graph = CouplingGraph::ring(n, 1.0)?;
    for (i, beta) in [1.0f64, 3.0, 10.0].into_iter().enumerate() {
        let n_traj = target.div_ceil(n);
        let spec = RunSpec {
            simulator: Simulator::Kuramoto(KuramotoParams::from_beta(1.0, beta, graph.clone())?),
            initial: InitialState::RingEquilibrium(beta),
            dt: 0.005,
            sample_times: vec![20.0],
            n_trajectories: n_traj,
            master_seed: 100 + i as u64,
        };
        let lang = relative_phases_at(&ensemble_run(&spec)?, 20.0)?;
        let thin = 20;
        let per_chain = oracle.div_ceil(n * 8);
        let cfg = McmcConfig {
            beta,
            proposal_width: 1.0,
            n_sweeps: 0,
            burn_in: nopo_xy::mcmc::default_burn_in(beta, n),
            thin,
            seed: 200 + i as u64,
            adapt: true,
            order: SweepOrder::Sequential,
            start: ChainStart::Aligned,
        };
        let cfg = McmcConfig {
            n_sweeps: cfg.burn_in + per_chain * thin,
            ..cfg
        };
        let mc: Vec<f64> = sample_chains(&cfg, &graph, 8)?
            .iter()
            .flat_map(|c| c.samples.iter().flat_map(|s| s.ring_relative_phases()))
            .collect();
        let d = distribution_distance(&lang, DistanceReference::Samples(&mc))?;
        checks.push(Check::below(format!("tv_kuramoto_vs_metropolis_b{beta}"), d.tv_distance, 0.01));
    }
    Ok(Report::new("boltzmann", checks))
}

fn reduction_suite() -> CliResult<Report> {
    let n = 8;
    let beta = 2.0;
    let graph = CouplingGraph::ring(n, 1.0)?;
    let opo = OpoParams::with_pump_ratio(1e3, 1e5, 1e5, 1.0, 2.0)?;
    let nss = steady_state_photon_number(&opo)?;
    let net = NetworkParams::new(opo, 1.0, nss / beta, graph.clone())?;
    let times: Vec<f64> = (0..4).map(|i| 20.0 + 10.0 * i as f64).collect();
    let sims = [
        ("kuramoto", Simulator::Kuramoto(net.kuramoto_reduction()?), 0.005),
        ("split", Simulator::AmplitudePhase(net.clone()), 5e-5),
        ("full", Simulator::Full(net), 5e-5),
    ];
    let mut samples = Vec::new();
    for (i, (name, sim, dt)) in sims.into_iter().enumerate() {
        let spec = RunSpec {
            simulator: sim,
            initial: InitialState::UniformRandom,
            dt,
            sample_times: times.clone(),
            n_trajectories: 64,
            master_seed: 300 + i as u64,
        };
        let recs = ensemble_run(&spec)?;
        let mut phases = Vec::new();
        for &t in &times {
            phases.extend(relative_phases_at(&recs, t)?);
        }
        samples.push((name, phases));
    }
    let mut checks = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            let ks = ks_two_sample(&samples[a].1, &samples[b].1)?;
            checks.push(Check {
                name: format!("ks_{}_vs_{}", samples[a].0, samples[b].0),
                passed: ks.p_value >= 0.01,
                value: ks.p_value,
                threshold: 0.01,
            });
        }
    }
    Ok(Report::new("reduction", checks))
}

pub fn report_json(report: &Report) -> Value {
    json!({ "command": "validate", "report": report.to_json() })
}
