use std::f64::consts::PI;

use super::bessel::bessel_i_scaled_orders;
use crate::{Error, Result};

/// Default truncation order of the transfer-matrix sums.
pub const DEFAULT_N_MAX: usize = 40;

const TRUNCATION_TOL: f64 = 1e-14;

/// A ferromagnetic XY ring of `n_spins` unit couplings at inverse temperature `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    pub n_spins: usize,
    pub beta: f64,
}

impl RingSpec {
    pub fn new(n_spins: usize, beta: f64) -> Result<Self> {
        if n_spins < 3 {
            return Err(Error::invalid("n_spins", format!("ring needs N >= 3, got {n_spins}")));
        }
        check_beta(beta)?;
        Ok(Self { n_spins, beta })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(Error::NonFinite("beta"));
    }
    if beta < 0.0 {
        return Err(Error::invalid("beta", format!("must be non-negative, got {beta}")));
    }
    Ok(())
}

/// Normalised transfer-matrix eigenvalues `q_n = I_n(β)/I₀(β)` for
/// `n = 0..=n_max+1`, plus `ln(e^{−β} I₀(β))`.
struct Spectrum {
    q: Vec<f64>,
    log_i0_scaled: f64,
}

impl Spectrum {
    fn new(spec: &RingSpec, n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        let scaled = bessel_i_scaled_orders(n_max + 2, spec.beta)?;
        let i0 = scaled[0];
        let q: Vec<f64> = scaled.iter().map(|v| v / i0).collect();
        let s = Self {
            q,
            log_i0_scaled: i0.ln(),
        };
        // pdf and energy sums carry power N−1, the partition function power N;
        // the N−1 tail dominates
        s.check_tail(n_max, spec.n_spins as i32 - 1)?;
        Ok(s)
    }

    /// Bounds `2 Σ_{n>n_max} q_n^p` by a geometric series using the
    /// (decreasing) ratio `q_{n_max+2}/q_{n_max+1}`.
    fn check_tail(&self, n_max: usize, p: i32) -> Result<()> {
        let first = self.q[n_max + 1];
        if first == 0.0 {
            return Ok(());
        }
        let rho = (self.q[n_max + 2] / first).powi(p);
        let tail = 2.0 * first.powi(p) / (1.0 - rho);
        let total = self.power_sum(n_max, p);
        if !(tail <= TRUNCATION_TOL * total) {
            return Err(Error::Truncation { n_max, tail: tail / total });
        }
        Ok(())
    }

    /// `Σ_{|n| ≤ n_max} q_n^p`.
    fn power_sum(&self, n_max: usize, p: i32) -> f64 {
        // small terms first
        let mut s = 0.0;
        for n in (1..=n_max).rev() {
            s += 2.0 * self.q[n].powi(p);
        }
        s + 1.0
    }
}

/// `ln Z` with `Z = Σ_n I_n(β)^N`, the partition function normalised by
/// `(2π)^N`. Evaluated as `N(β + ln e^{−β}I₀) + ln Σ_n (I_n/I₀)^N`, which
/// stays finite for any `N` and `β` up to several hundred.
pub fn partition_function(spec: &RingSpec, n_max: usize) -> Result<f64> {
    check_beta(spec.beta)?;
    let s = Spectrum::new(spec, n_max)?;
    let n = spec.n_spins as i32;
    s.check_tail(n_max, n)?;
    Ok(spec.n_spins as f64 * (spec.beta + s.log_i0_scaled) + s.power_sum(n_max, n).ln())
}

/// Exact marginal density of one ring-neighbour relative phase,
/// `e^{β cos θ̃} Σ_n cos(nθ̃) I_n(β)^{N−1} / (2π Z)`.
pub fn relative_phase_pdf_exact(theta_rel: f64, spec: &RingSpec, n_max: usize) -> Result<f64> {
    if !theta_rel.is_finite() {
        return Err(Error::NonFinite("theta_rel"));
    }
    check_beta(spec.beta)?;
    let s = Spectrum::new(spec, n_max)?;
    let n = spec.n_spins as i32;
    let mut series = 0.0;
    for k in (1..=n_max).rev() {
        series += 2.0 * (k as f64 * theta_rel).cos() * s.q[k].powi(n - 1);
    }
    series += 1.0;
    let norm = s.power_sum(n_max, n);
    Ok((spec.beta * (theta_rel.cos() - 1.0)).exp() * series
        / (2.0 * PI * s.log_i0_scaled.exp() * norm))
}

/// Exact ensemble energy `−(N/Z) Σ_n I_n(β)^{N−1} I_{n+1}(β)`.
pub fn mean_energy_exact(spec: &RingSpec, n_max: usize) -> Result<f64> {
    check_beta(spec.beta)?;
    let s = Spectrum::new(spec, n_max)?;
    let n = spec.n_spins as i32;
    let q = &s.q;
    // n ≥ 0 pairs with q_{n+1}; the mirrored n < 0 terms pair q_|n| with q_{|n|−1}
    let mut acc = 0.0;
    for k in (1..=n_max).rev() {
        let w = q[k].powi(n - 1);
        acc += w * (q[k + 1] + q[k - 1]);
    }
    acc += q[1];
    Ok(-(spec.n_spins as f64) * acc / s.power_sum(n_max, n))
}

/// Large-ring limit of the relative-phase density: the zero-mean von Mises
/// law `e^{β cos θ̃} / (2π I₀(β))`.
pub fn relative_phase_pdf_approx(theta_rel: f64, beta: f64) -> Result<f64> {
    if !theta_rel.is_finite() {
        return Err(Error::NonFinite("theta_rel"));
    }
    check_beta(beta)?;
    let i0 = bessel_i_scaled_orders(0, beta)?[0];
    Ok((beta * (theta_rel.cos() - 1.0)).exp() / (2.0 * PI * i0))
}

/// Large-ring mean energy `−N I₁(β)/I₀(β)`.
pub fn mean_energy_approx(n_spins: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(-(n_spins as f64) * super::bessel::bessel_ratio_i1_i0(beta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::quadrature;

    #[test]
    fn infinite_temperature() {
        let spec = RingSpec::new(7, 0.0).unwrap();
        assert_eq!(partition_function(&spec, 40).unwrap(), 0.0);
        assert_eq!(mean_energy_exact(&spec, 40).unwrap(), 0.0);
        assert_eq!(mean_energy_approx(7, 0.0).unwrap(), 0.0);
        for &t in &[-3.0, 0.0, 1.2] {
            let p = relative_phase_pdf_exact(t, &spec, 40).unwrap();
            assert!((p - 1.0 / (2.0 * PI)).abs() < 1e-15);
            assert!((relative_phase_pdf_approx(t, 0.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn small_ring_matches_quadrature() {
        let spec = RingSpec::new(3, 1.0).unwrap();
        let z = partition_function(&spec, 40).unwrap().exp();
        let zq = quadrature::partition_function(3, 1.0, 2048);
        assert!((z - zq).abs() < 1e-8 * zq);
        for &t in &[-2.5, -0.3, 0.0, 0.9, 3.0] {
            let p = relative_phase_pdf_exact(t, &spec, 40).unwrap();
            let pq = quadrature::relative_phase_pdf(t, 3, 1.0, 2048);
            assert!((p - pq).abs() < 1e-6);
        }
        let e = mean_energy_exact(&spec, 40).unwrap();
        let eq = quadrature::mean_energy(3, 1.0, 2048);
        assert!((e - eq).abs() < 1e-6 * eq.abs());
    }

    #[test]
    fn large_ring_is_finite_and_collapses() {
        let spec = RingSpec::new(5000, 31.0).unwrap();
        let lz = partition_function(&spec, 40).unwrap();
        assert!(lz.is_finite());
        let ex = mean_energy_exact(&spec, 40).unwrap() / 5000.0;
        let ap = mean_energy_approx(5000, 31.0).unwrap() / 5000.0;
        assert!((ex - ap).abs() < 1e-10);
        assert!((ap + 0.98374).abs() < 1e-5);
        // asymptotic cross-check 1 − 1/(2β) − 1/(8β²)
        let asym = 1.0 - 1.0 / 62.0 - 1.0 / (8.0 * 961.0);
        assert!((-ap - asym).abs() < 1e-4);
    }

    #[test]
    fn approx_energy_examples() {
        let e = mean_energy_approx(5000, 1.0).unwrap();
        assert!((e + 2231.95).abs() < 0.01, "{e}");
        let e = mean_energy_approx(5000, 31.0).unwrap();
        assert!((e + 4918.7).abs() < 0.05, "{e}");
    }

    #[test]
    fn approx_pdf_peak() {
        let p = relative_phase_pdf_approx(0.0, 1.0).unwrap();
        let i0 = crate::analytics::bessel_i(0, 1.0).unwrap();
        assert!((p - std::f64::consts::E / (2.0 * PI * i0)).abs() < 1e-15);
        assert!((p - 0.34171).abs() < 1e-5);
    }

    #[test]
    fn truncation_is_detected() {
        let spec = RingSpec::new(3, 200.0).unwrap();
        assert!(matches!(
            partition_function(&spec, 5),
            Err(Error::Truncation { n_max: 5, .. })
        ));
        assert!(partition_function(&spec, 400).is_ok());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(RingSpec::new(2, 1.0).is_err());
        assert!(RingSpec::new(5, -0.1).is_err());
        assert!(relative_phase_pdf_approx(0.0, f64::NAN).is_err());
    }
}
