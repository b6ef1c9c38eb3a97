//! Goodness-of-fit helpers: histograms, Kolmogorov–Smirnov and χ² tests,
//! and a von Mises sampler.

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

/// Counts of `samples` in `bins` equal bins over `[lo, hi)`. Values outside
/// the range are clamped into the edge bins.
pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Vec<u64>> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::invalid("bins", "need at least one bin over a non-empty range"));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in samples {
        if !x.is_finite() {
            return Err(Error::NonFinite("samples"));
        }
        let b = ((x - lo) / width).floor().clamp(0.0, (bins - 1) as f64) as usize;
        counts[b] += 1;
    }
    Ok(counts)
}

/// Total-variation distance between two histograms with equal binning.
pub fn total_variation(a: &[u64], b: &[u64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(Error::InsufficientData("empty histogram".into()));
    }
    let tv = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x as f64 / na as f64 - y as f64 / nb as f64).abs())
        .sum::<f64>();
    Ok(0.5 * tv)
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

impl KsResult {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("samples"));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("KS test needs non-empty samples".into()));
    }
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
    })
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("KS test needs non-empty samples".into()));
    }
    let s = sorted(samples)?;
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson χ² test of uniformity on `[lo, hi)` with `bins` equal bins.
pub fn chi_square_uniform(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<ChiSquareResult> {
    if bins < 2 {
        return Err(Error::invalid("bins", "need at least two bins"));
    }
    let counts = histogram(samples, lo, hi, bins)?;
    let expected = samples.len() as f64 / bins as f64;
    if expected < 5.0 {
        return Err(Error::InsufficientData(format!(
            "{} samples give fewer than 5 expected counts per bin",
            samples.len()
        )));
    }
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum::<f64>();
    let dof = bins - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::invalid("dof", e.to_string()))?;
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// Draws one sample from the von Mises distribution with mean 0 and
/// concentration `kappa` (Best–Fisher rejection).
pub fn sample_von_mises<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> f64 {
    use std::f64::consts::PI;
    if kappa < 1e-8 {
        return rng.random::<f64>() * 2.0 * PI - PI;
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        let u2: f64 = rng.random();
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let u3: f64 = rng.random();
            let theta = f.clamp(-1.0, 1.0).acos();
            return if u3 > 0.5 { theta } else { -theta };
        }
    }
}
