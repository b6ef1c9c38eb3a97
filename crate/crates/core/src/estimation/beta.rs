use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analytics::{bessel_i_scaled, bessel_ratio_i1_i0};
use crate::stats::histogram;
use crate::{Error, Result};

/// Bins used by [`BetaMethod::HistogramFit`] over `[−π, π)`.
pub const HISTOGRAM_BINS: usize = 36;

const MIN_SAMPLES: usize = 10;
const INVERSE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaMethod {
    /// Maximum likelihood: invert `I₁(β)/I₀(β) = R`.
    Mle,
    /// Least squares of the binned density against the von Mises law.
    HistogramFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub beta_eff: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub method: BetaMethod,
    /// Circular mean of the samples; reported, not fitted.
    pub mean_direction: f64,
}

/// `dA/dβ` for `A = I₁/I₀`.
fn ratio_derivative(beta: f64, a: f64) -> f64 {
    if beta < 1e-8 {
        0.5
    } else {
        1.0 - a / beta - a * a
    }
}

/// The unique `β ≥ 0` with `I₁(β)/I₀(β) = r`, for `r ∈ [0, 1)`.
pub fn besselratio_inverse(r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::NonFinite("r"));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::invalid("r", format!("must lie in [0, 1), got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while bessel_ratio_i1_i0(hi)? < r {
        lo = hi;
        hi *= 2.0;
        if hi > 1e15 {
            return Err(Error::DegenerateConcentration(r));
        }
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if bessel_ratio_i1_i0(mid)? < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..50 {
        let a = bessel_ratio_i1_i0(beta)?;
        let step = (a - r) / ratio_derivative(beta, a);
        let next = (beta - step).clamp(lo, hi);
        let done = (next - beta).abs() <= 1e-15 * beta.max(1.0);
        beta = next;
        if done || (a - r).abs() < 1e-3 * INVERSE_TOL {
            break;
        }
    }
    Ok(beta)
}

/// Estimates the concentration of relative-phase samples under the von
/// Mises model centred at zero.
pub fn estimate_beta(relative_phases: &[f64], method: BetaMethod) -> Result<BetaEstimate> {
    let m = relative_phases.len();
    if m < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_SAMPLES} samples, got {m}"
        )));
    }
    if relative_phases.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("relative_phases"));
    }
    let (s, c) = relative_phases
        .iter()
        .fold((0.0, 0.0), |(s, c), &x| (s + x.sin(), c + x.cos()));
    let mean_direction = s.atan2(c);
    let r = s.hypot(c) / m as f64;
    if r >= 1.0 - 1e-14 {
        return Err(Error::DegenerateConcentration(r));
    }
    let beta_mle = besselratio_inverse(r)?;
    match method {
        BetaMethod::Mle => {
            let a = bessel_ratio_i1_i0(beta_mle)?;
            Ok(BetaEstimate {
                beta_eff: beta_mle,
                std_error: 1.0 / (m as f64 * ratio_derivative(beta_mle, a)).sqrt(),
                n_samples: m,
                method,
                mean_direction,
            })
        }
        BetaMethod::HistogramFit => {
            let (beta, se) = histogram_fit(relative_phases, beta_mle)?;
            Ok(BetaEstimate {
                beta_eff: beta,
                std_error: se,
                n_samples: m,
                method,
                mean_direction,
            })
        }
    }
}

/// Bin-averaged von Mises density on `HISTOGRAM_BINS` bins (Simpson rule).
fn binned_density(beta: f64) -> Result<Vec<f64>> {
    const SUB: usize = 16;
    let w = 2.0 * PI / HISTOGRAM_BINS as f64;
    let norm = 2.0 * PI * bessel_i_scaled(0, beta)?;
    let f = |x: f64| (beta * (x.cos() - 1.0)).exp() / norm;
    let h = w / SUB as f64;
    Ok((0..HISTOGRAM_BINS)
        .map(|b| {
            let a = -PI + b as f64 * w;
            let mut acc = f(a) + f(a + w);
            for j in 1..SUB {
                acc += f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0 / w
        })
        .collect())
}

fn histogram_fit(samples: &[f64], start: f64) -> Result<(f64, f64)> {
    let m = samples.len() as f64;
    let w = 2.0 * PI / HISTOGRAM_BINS as f64;
    let counts = histogram(samples, -PI, PI, HISTOGRAM_BINS)?;
    let observed: Vec<f64> = counts.iter().map(|&c| c as f64 / (m * w)).collect();
    let rss = |beta: f64| -> Result<f64> {
        Ok(binned_density(beta)?
            .iter()
            .zip(&observed)
            .map(|(p, o)| (p - o).powi(2))
            .sum())
    };

    // golden-section search on a bracket around the likelihood estimate
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 2.0 * start + 5.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (rss(x1)?, rss(x2)?);
    while b - a > 1e-9 * b.max(1.0) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = rss(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = rss(x2)?;
        }
    }
    let beta = 0.5 * (a + b);

    let eps = 1e-5 * beta.max(1.0);
    let up = binned_density(beta + eps)?;
    let down = binned_density((beta - eps).max(0.0))?;
    let span = beta + eps - (beta - eps).max(0.0);
    let jtj: f64 = up.iter().zip(&down).map(|(u, d)| ((u - d) / span).powi(2)).sum();
    let sigma2 = rss(beta)? / (HISTOGRAM_BINS - 1) as f64;
    let se = if jtj > 0.0 { (sigma2 / jtj).sqrt() } else { f64::INFINITY };
    Ok((beta, se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::sample_von_mises;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_examples() {
        assert_eq!(besselratio_inverse(0.0).unwrap(), 0.0);
        assert!((besselratio_inverse(0.446399).unwrap() - 1.0).abs() < 1e-4);
        assert!(besselratio_inverse(1.0).is_err());
        assert!(besselratio_inverse(-0.1).is_err());
        for beta in [1e-3, 0.3, 1.0, 5.7, 31.0, 400.0] {
            let r = bessel_ratio_i1_i0(beta).unwrap();
            let back = besselratio_inverse(r).unwrap();
            assert!((bessel_ratio_i1_i0(back).unwrap() - r).abs() < 1e-10);
            assert!((back / beta - 1.0).abs() < 1e-6, "{beta} -> {back}");
        }
    }

    #[test]
    fn inverse_is_monotone() {
        let mut prev = -1.0;
        for i in 0..200 {
            let b = besselratio_inverse(i as f64 / 200.0).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn degenerate_samples() {
        assert!(matches!(
            estimate_beta(&[0.3; 20], BetaMethod::Mle),
            Err(Error::DegenerateConcentration(_))
        ));
        assert!(estimate_beta(&[0.3; 5], BetaMethod::Mle).is_err());
    }

    #[test]
    fn both_methods_recover_concentration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..100_000).map(|_| sample_von_mises(5.7, &mut rng)).collect();
        let mle = estimate_beta(&xs, BetaMethod::Mle).unwrap();
        let fit = estimate_beta(&xs, BetaMethod::HistogramFit).unwrap();
        assert!((mle.beta_eff - 5.7).abs() < 3.0 * mle.std_error, "{mle:?}");
        let combined = mle.std_error.hypot(fit.std_error);
        assert!((mle.beta_eff - fit.beta_eff).abs() < 3.0 * combined, "{mle:?} {fit:?}");
        assert!(mle.mean_direction.abs() < 0.01);
    }
}
