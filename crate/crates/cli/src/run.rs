//! The `run` subcommand: Langevin ensembles over a β sweep.

use std::path::PathBuf;

use nopo_xy::analytics::{bessel_ratio_i1_i0, mean_energy_approx, mean_energy_exact, RingSpec, DEFAULT_N_MAX};
use nopo_xy::estimation::{
    estimate_beta, mean_energy_of_samples, photon_fluctuation_diagnostics, relative_phases_at, BetaMethod,
};
use nopo_xy::network::{ensemble_run, InitialState, KuramotoParams, NetworkParams, RunSpec, Simulator};
use nopo_xy::opo::steady_state_photon_number;
use nopo_xy::xy::CouplingGraph;
use serde_json::{json, Value};

use crate::config::{ExperimentSpec, Initial, Model, Point, Topology};
use crate::error::CliResult;
use crate::output::{json_string, samples_csv, write_file};

/// Files written by a run.
#[derive(Debug, Clone)]
pub struct RunOutputs {
    pub samples: Vec<PathBuf>,
    pub summary: PathBuf,
    pub summary_json: Value,
}

pub fn build_graph(spec: &ExperimentSpec) -> CliResult<CouplingGraph<f64>> {
    Ok(match spec.topology {
        Topology::Ring => CouplingGraph::ring(spec.n_spins, spec.j)?,
        Topology::Chain => CouplingGraph::chain(spec.n_spins, spec.j)?,
    })
}

fn simulator(spec: &ExperimentSpec, point: &Point, graph: &CouplingGraph<f64>) -> CliResult<Simulator> {
    Ok(match spec.model {
        Model::Kuramoto => Simulator::Kuramoto(KuramotoParams::new(point.gamma_inj, point.d_theta, graph.clone())?),
        Model::Split | Model::Full => {
            let nss = steady_state_photon_number(&spec.opo)?;
            let p = NetworkParams::new(spec.opo, point.gamma_inj, point.d_theta * nss, graph.clone())?;
            if spec.model == Model::Split {
                Simulator::AmplitudePhase(p)
            } else {
                Simulator::Full(p)
            }
        }
    })
}

/// Reference mean energy for the sweep point: exact transfer-matrix value
/// for rings, open-chain value for chains.
fn reference_energies(spec: &ExperimentSpec, beta: f64) -> CliResult<(Value, Value)> {
    if !beta.is_finite() || spec.j <= 0.0 {
        return Ok((Value::Null, Value::Null));
    }
    let bj = beta * spec.j;
    let approx = spec.j * mean_energy_approx(spec.n_spins, bj)?;
    let exact = match spec.topology {
        Topology::Ring => RingSpec::new(spec.n_spins, bj).and_then(|r| mean_energy_exact(&r, DEFAULT_N_MAX)),
        Topology::Chain => bessel_ratio_i1_i0(bj).map(|a| -((spec.n_spins - 1) as f64) * a),
    };
    let exact = match exact {
        Ok(e) => json!(spec.j * e),
        // the transfer-matrix sum cannot be truncated safely at extreme β
        Err(e) if e.is_numerical() => json!({ "error": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    Ok((exact, json!(approx)))
}

fn estimate_json(phases: &[f64], method: BetaMethod) -> Value {
    match estimate_beta(phases, method) {
        Ok(e) => json!({ "beta_eff": e.beta_eff, "std_error": e.std_error, "mean_direction": e.mean_direction }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Runs every sweep point and writes `samples_pNN.csv` and `summary.json`
/// into the output directory.
pub fn run_experiment(spec: &ExperimentSpec) -> CliResult<RunOutputs> {
    let graph = build_graph(spec)?;
    let points = spec.points()?;
    let mut samples = Vec::new();
    let mut point_json = Vec::new();

    for (idx, point) in points.iter().enumerate() {
        let sim = simulator(spec, point, &graph)?;
        let dt = match spec.dt {
            Some(dt) => dt,
            None => sim.default_dt()?,
        };
        let initial = match spec.initial {
            Initial::UniformRandom => InitialState::UniformRandom,
            Initial::Aligned => InitialState::Aligned(0.0),
            Initial::RingEquilibrium => InitialState::RingEquilibrium(point.beta_set),
        };
        let run = RunSpec {
            simulator: sim,
            initial,
            dt,
            sample_times: spec.t_a.clone(),
            n_trajectories: spec.n_trajectories,
            master_seed: spec.master_seed.wrapping_add(idx as u64),
        };
        let records = ensemble_run(&run)?;

        let path = spec.output_dir.join(format!("samples_p{idx:02}.csv"));
        write_file(&path, &samples_csv(&records, &spec.t_a)?)?;
        samples.push(path);

        let mut results = Vec::new();
        for &t in &spec.t_a {
            let phases = relative_phases_at(&records, t)?;
            let energy = mean_energy_of_samples(&records, &graph, t)?;
            results.push(json!({
                "t_a_seconds": t,
                "n_samples": phases.len(),
                "beta_mle": estimate_json(&phases, BetaMethod::Mle),
                "beta_histogram_fit": estimate_json(&phases, BetaMethod::HistogramFit),
                "mean_energy": energy.mean,
                "energy_std_dev": energy.std_dev,
                "energy_std_error": energy.std_error,
            }));
        }
        let (exact, approx) = reference_energies(spec, point.beta_set)?;
        let photons = match &run.simulator {
            Simulator::AmplitudePhase(p) | Simulator::Full(p) => {
                let d = photon_fluctuation_diagnostics(&records, p.gamma_inj, p.diffusion_d)?;
                json!({
                    "delta": d.delta,
                    "effective_j_spread": d.effective_j_spread,
                    "beta_correction": d.beta_correction,
                    "mean_photon_number": d.mean_photon_number,
                })
            }
            Simulator::Kuramoto(_) => Value::Null,
        };
        point_json.push(json!({
            "index": idx,
            "beta_set": if point.beta_set.is_finite() { json!(point.beta_set) } else { json!("inf") },
            "gamma_inj_hz": point.gamma_inj,
            "d_theta_hz": point.d_theta,
            "dt_seconds": dt,
            "master_seed": run.master_seed,
            "samples_csv": path_name(&samples[idx]),
            "results": results,
            "reference": {
                "mean_energy_exact": exact,
                "mean_energy_approx": approx,
            },
            "photon_diagnostics": photons,
        }));
    }

    let summary_json = json!({
        "command": "run",
        "model": spec.model.name(),
        "topology": match spec.topology { Topology::Ring => "ring", Topology::Chain => "chain" },
        "n_spins": spec.n_spins,
        "j": spec.j,
        "n_trajectories": spec.n_trajectories,
        "master_seed": spec.master_seed,
        "t_a_seconds": spec.t_a,
        "points": point_json,
    });
    let summary = spec.output_dir.join("summary.json");
    write_file(&summary, &json_string(&summary_json))?;
    Ok(RunOutputs {
        samples,
        summary,
        summary_json,
    })
}

fn path_name(p: &std::path::Path) -> String {
    p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
}
