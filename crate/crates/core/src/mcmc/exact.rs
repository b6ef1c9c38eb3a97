use rand::Rng;

use crate::stats::sample_von_mises;
use crate::xy::{wrap_unchecked, PhaseConfig};
use crate::{Error, Result};

/// Exact draw from the Gibbs measure of the uniform ring `ring(n, 1)` at
/// inverse temperature `beta`.
///
/// The bonds `θ_{k+1} − θ_k` of the ring are independent von Mises
/// variables conditioned on summing to zero modulo 2π. The first `n − 1`
/// bonds are drawn freely; the closing bond is fixed by the constraint and
/// the whole draw is accepted with probability `exp(β(cos φ_n − 1))`.
/// The global phase is uniform.
pub fn sample_ring_equilibrium<R: Rng + ?Sized>(n_spins: usize, beta: f64, rng: &mut R) -> Result<PhaseConfig<f64>> {
    if n_spins < 3 {
        return Err(Error::invalid("n_spins", "a ring needs at least 3 spins"));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::invalid("beta", "must be non-negative and finite"));
    }
    let mut theta = vec![0.0; n_spins];
    loop {
        theta[0] = rng.random::<f64>() * std::f64::consts::TAU;
        for k in 1..n_spins {
            theta[k] = theta[k - 1] + sample_von_mises(beta, rng);
        }
        let closing = wrap_unchecked(theta[0] - theta[n_spins - 1]);
        if rng.random::<f64>() < (beta * (closing.cos() - 1.0)).exp() {
            return Ok(PhaseConfig::from_raw(&theta));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{mean_energy_exact, RingSpec};
    use crate::xy::{xy_energy, CouplingGraph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_ring_energy_matches_transfer_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = CouplingGraph::ring(4, 1.0).unwrap();
        let m = 40_000;
        let es: Vec<f64> = (0..m)
            .map(|_| xy_energy(&sample_ring_equilibrium(4, 1.5, &mut rng).unwrap(), &g).unwrap().value())
            .collect();
        let mean = es.iter().sum::<f64>() / m as f64;
        let sd = (es.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1) as f64).sqrt();
        let exact = mean_energy_exact(&RingSpec::new(4, 1.5).unwrap(), 40).unwrap();
        assert!((mean - exact).abs() < 4.0 * sd / (m as f64).sqrt(), "{mean} vs {exact}");
    }
}
