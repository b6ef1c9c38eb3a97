//! Single-site Metropolis sampler for the XY model, plus an exact sampler
//! for the ring and distribution distances. Shares no code with the
//! stochastic integrators.

mod distance;
mod exact;

pub use distance::{distribution_distance, DistanceReference, Distances, DISTANCE_BINS, MIN_DISTANCE_SAMPLES};
pub use exact::sample_ring_equilibrium;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::xy::{wrap_unchecked, CouplingGraph, PhaseConfig};
use crate::{Error, Result, Scalar};

/// Acceptance rate targeted by burn-in width adaptation.
pub const TARGET_ACCEPTANCE: f64 = 0.4;

const ADAPT_WINDOW: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOrder {
    /// Sites `0, 1, …, N−1` in turn.
    Sequential,
    /// `N` sites drawn uniformly with replacement.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStart {
    Aligned,
    UniformRandom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McmcConfig<T> {
    pub beta: T,
    /// Half-width `w` of the uniform proposal window, in `(0, π]`.
    pub proposal_width: T,
    /// Total sweeps including burn-in.
    pub n_sweeps: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    /// Tune `proposal_width` toward [`TARGET_ACCEPTANCE`] during burn-in.
    pub adapt: bool,
    pub order: SweepOrder,
    pub start: ChainStart,
}

impl<T: Scalar> McmcConfig<T> {
    /// Sequential, non-adaptive chain with the default burn-in for `n_spins`.
    pub fn new(beta: T, proposal_width: T, n_spins: usize, n_samples: usize, thin: usize, seed: u64) -> Result<Self> {
        let burn_in = default_burn_in(beta.as_f64(), n_spins);
        let c = Self {
            beta,
            proposal_width,
            n_sweeps: burn_in + n_samples * thin,
            burn_in,
            thin,
            seed,
            adapt: false,
            order: SweepOrder::Sequential,
            start: ChainStart::Aligned,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() {
            return Err(Error::NonFinite("beta"));
        }
        if self.beta < T::zero() {
            return Err(Error::invalid("beta", "must be non-negative"));
        }
        if !(self.proposal_width > T::zero()) || self.proposal_width > T::PI() {
            return Err(Error::invalid("proposal_width", "must lie in (0, π]"));
        }
        if self.thin == 0 {
            return Err(Error::invalid("thin", "must be at least 1"));
        }
        if self.n_sweeps < self.burn_in {
            return Err(Error::invalid("n_sweeps", "must be at least burn_in"));
        }
        Ok(())
    }
}

/// `10·N` sweeps for `β ≤ 10`, `100·N` above.
pub fn default_burn_in(beta: f64, n_spins: usize) -> usize {
    if beta <= 10.0 {
        10 * n_spins
    } else {
        100 * n_spins
    }
}

fn local_field<T: Scalar>(theta: &[T], graph: &CouplingGraph<T>, k: usize, angle: T) -> T {
    graph
        .neighbors(k)
        .iter()
        .fold(T::zero(), |acc, &(l, w)| acc + w * (angle - theta[l]).cos())
}

fn try_site<T: Scalar, R: Rng + ?Sized>(
    theta: &mut [T],
    graph: &CouplingGraph<T>,
    k: usize,
    beta: T,
    width: T,
    rng: &mut R,
) -> bool {
    let u = (T::sample_unit(rng) * T::of(2.0) - T::one()) * width;
    let proposal = wrap_unchecked(theta[k] + u);
    // H = −Σ J cos, so ΔH = −(new local sum − old local sum)
    let dh = local_field(theta, graph, k, theta[k]) - local_field(theta, graph, k, proposal);
    let accept = dh <= T::zero() || T::sample_unit(rng) < (-beta * dh).exp();
    if accept {
        theta[k] = proposal;
    }
    accept
}

/// One sweep over raw angles; returns the number of accepted moves.
pub fn metropolis_sweep_in_place<T: Scalar, R: Rng + ?Sized>(
    theta: &mut [T],
    graph: &CouplingGraph<T>,
    beta: T,
    width: T,
    order: SweepOrder,
    rng: &mut R,
) -> usize {
    let n = theta.len();
    let mut accepted = 0;
    for i in 0..n {
        let k = match order {
            SweepOrder::Sequential => i,
            SweepOrder::Random => rng.random_range(0..n),
        };
        accepted += try_site(theta, graph, k, beta, width, rng) as usize;
    }
    accepted
}

/// One Metropolis sweep of `N` single-site updates. Returns the new
/// configuration and the fraction of accepted proposals.
pub fn metropolis_sweep<T: Scalar, R: Rng + ?Sized>(
    config: &PhaseConfig<T>,
    graph: &CouplingGraph<T>,
    mcmc: &McmcConfig<T>,
    rng: &mut R,
) -> Result<(PhaseConfig<T>, f64)> {
    mcmc.validate()?;
    if config.n_spins() != graph.n_spins() {
        return Err(Error::DimensionMismatch {
            expected: graph.n_spins(),
            got: config.n_spins(),
        });
    }
    let mut theta = config.as_slice().to_vec();
    let acc = metropolis_sweep_in_place(&mut theta, graph, mcmc.beta, mcmc.proposal_width, mcmc.order, rng);
    Ok((PhaseConfig::from_raw(&theta), acc as f64 / theta.len() as f64))
}

/// Post-burn-in samples of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<T> {
    pub samples: Vec<PhaseConfig<T>>,
    /// Acceptance fraction over the sampling sweeps.
    pub acceptance_rate: f64,
    /// Proposal width used while sampling (after any adaptation).
    pub proposal_width: T,
}

/// Runs a chain seeded from `mcmc.seed`.
pub fn sample_chain<T: Scalar>(mcmc: &McmcConfig<T>, graph: &CouplingGraph<T>) -> Result<Chain<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(mcmc.seed);
    sample_chain_with_rng(mcmc, graph, &mut rng)
}

/// Runs a chain drawing from `rng`; `mcmc.seed` is ignored.
pub fn sample_chain_with_rng<T: Scalar, R: Rng + ?Sized>(
    mcmc: &McmcConfig<T>,
    graph: &CouplingGraph<T>,
    rng: &mut R,
) -> Result<Chain<T>> {
    mcmc.validate()?;
    let n = graph.n_spins();
    let mut theta = match mcmc.start {
        ChainStart::Aligned => PhaseConfig::aligned(n, T::zero())?,
        ChainStart::UniformRandom => PhaseConfig::uniform_random(n, rng)?,
    }
    .into_vec();
    let mut width = mcmc.proposal_width;

    let mut window = 0usize;
    for sweep in 1..=mcmc.burn_in {
        window += metropolis_sweep_in_place(&mut theta, graph, mcmc.beta, width, mcmc.order, rng);
        if mcmc.adapt && sweep % ADAPT_WINDOW == 0 {
            let rate = window as f64 / (ADAPT_WINDOW * n) as f64;
            let factor = T::of((rate - TARGET_ACCEPTANCE).exp());
            width = (width * factor).max(T::of(1e-4)).min(T::PI());
            window = 0;
        }
    }

    let sampling = mcmc.n_sweeps - mcmc.burn_in;
    let mut samples = Vec::with_capacity(sampling / mcmc.thin);
    let mut accepted = 0usize;
    for sweep in 1..=sampling {
        accepted += metropolis_sweep_in_place(&mut theta, graph, mcmc.beta, width, mcmc.order, rng);
        if sweep % mcmc.thin == 0 {
            samples.push(PhaseConfig::from_raw(&theta));
        }
    }
    let acceptance_rate = if sampling > 0 {
        accepted as f64 / (sampling * n) as f64
    } else {
        0.0
    };
    Ok(Chain {
        samples,
        acceptance_rate,
        proposal_width: width,
    })
}

/// Runs `n_chains` chains in parallel on independent streams of
/// `mcmc.seed`; output order follows the chain index.
pub fn sample_chains<T: Scalar>(
    mcmc: &McmcConfig<T>,
    graph: &CouplingGraph<T>,
    n_chains: usize,
) -> Result<Vec<Chain<T>>> {
    crate::network::ensemble_map(n_chains, mcmc.seed, |_, rng| sample_chain_with_rng(mcmc, graph, rng))
}
