//! The `mcmc` subcommand: Metropolis chains on `ring(N, 1)`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nopo_xy::analytics::{mean_energy_exact, relative_phase_pdf_exact, RingSpec, DEFAULT_N_MAX};
use nopo_xy::estimation::{estimate_beta, BetaMethod};
use nopo_xy::mcmc::{
    default_burn_in, distribution_distance, sample_chains, ChainStart, DistanceReference, McmcConfig, SweepOrder,
};
use nopo_xy::xy::{xy_energy, CouplingGraph};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::{json_string, write_file};

#[derive(Debug, Clone, PartialEq)]
pub struct McmcJob {
    pub beta: f64,
    pub n_spins: usize,
    pub n_samples: usize,
    pub thin: usize,
    pub burn_in: Option<usize>,
    pub proposal_width: f64,
    pub adapt: bool,
    pub order: SweepOrder,
    pub start: ChainStart,
    pub n_chains: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
}

pub fn run_mcmc(job: &McmcJob) -> CliResult<Value> {
    if job.n_chains == 0 {
        return Err(CliError::spec("chains", "must be at least 1"));
    }
    if job.n_spins < 3 {
        return Err(CliError::spec("n-spins", "a ring needs at least 3 spins"));
    }
    let graph = CouplingGraph::ring(job.n_spins, 1.0)?;
    let burn_in = job.burn_in.unwrap_or_else(|| default_burn_in(job.beta, job.n_spins));
    let cfg = McmcConfig {
        beta: job.beta,
        proposal_width: job.proposal_width,
        n_sweeps: burn_in + job.n_samples * job.thin,
        burn_in,
        thin: job.thin,
        seed: job.seed,
        adapt: job.adapt,
        order: job.order,
        start: job.start,
    };
    cfg.validate().map_err(|e| CliError::spec("mcmc", e.to_string()))?;
    let chains = sample_chains(&cfg, &graph, job.n_chains)?;

    let mut csv = String::from("chain_id,sweep,k,theta_k,theta_rel_k\n");
    let mut phases = Vec::new();
    let mut energies = Vec::new();
    for (c, chain) in chains.iter().enumerate() {
        for (i, s) in chain.samples.iter().enumerate() {
            let sweep = burn_in + (i + 1) * job.thin;
            let rel = s.ring_relative_phases();
            for (k, (th, r)) in s.as_slice().iter().zip(&rel).enumerate() {
                writeln!(csv, "{c},{sweep},{k},{th},{r}").unwrap();
            }
            phases.extend(rel);
            energies.push(xy_energy(s, &graph)?.value());
        }
    }
    let csv_path = job.output_dir.join("chains.csv");
    write_file(&csv_path, &csv)?;

    let m = energies.len() as f64;
    let mean = energies.iter().sum::<f64>() / m;
    let sd = if m > 1.0 {
        (energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        0.0
    };
    let ring = RingSpec::new(job.n_spins, job.beta)?;
    let pdf = |x: f64| relative_phase_pdf_exact(x, &ring, DEFAULT_N_MAX).unwrap_or(f64::NAN);
    let distance = match distribution_distance(&phases, DistanceReference::Pdf(&pdf)) {
        Ok(d) => json!({ "tv_distance": d.tv_distance, "ks_statistic": d.ks_statistic, "ks_p_value": d.ks_p_value }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let beta_eff = match estimate_beta(&phases, BetaMethod::Mle) {
        Ok(e) => json!({ "beta_eff": e.beta_eff, "std_error": e.std_error }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let summary = json!({
        "command": "mcmc",
        "beta": job.beta,
        "n_spins": job.n_spins,
        "n_chains": job.n_chains,
        "burn_in_sweeps": burn_in,
        "thin": job.thin,
        "seed": job.seed,
        "acceptance_rate": chains.iter().map(|c| c.acceptance_rate).collect::<Vec<_>>(),
        "proposal_width": chains.iter().map(|c| c.proposal_width).collect::<Vec<_>>(),
        "n_configurations": energies.len(),
        "mean_energy": mean,
        "energy_std_dev": sd,
        "mean_energy_exact": mean_energy_exact(&ring, DEFAULT_N_MAX)?,
        "beta_mle": beta_eff,
        "distance_to_exact_pdf": distance,
        "chains_csv": file_name(&csv_path),
    });
    write_file(&job.output_dir.join("summary.json"), &json_string(&summary))?;
    Ok(summary)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
}
