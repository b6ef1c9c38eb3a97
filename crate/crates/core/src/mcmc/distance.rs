use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::stats::{histogram, ks_one_sample, ks_two_sample, total_variation};
use crate::{Error, Result};

/// Equal bins over `[−π, π)` for the total-variation distance.
pub const DISTANCE_BINS: usize = 36;

pub const MIN_DISTANCE_SAMPLES: usize = 1000;

const GRID: usize = 7200;

/// What to compare a relative-phase sample against.
#[derive(Clone, Copy)]
pub enum DistanceReference<'a> {
    Samples(&'a [f64]),
    /// A density on `[−π, π)`; integrated numerically.
    Pdf(&'a dyn Fn(f64) -> f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub tv_distance: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
}

/// Tabulated CDF of `pdf` on a uniform grid over `[−π, π]`, normalised to 1.
fn tabulate_cdf(pdf: &dyn Fn(f64) -> f64) -> Result<Vec<f64>> {
    let h = 2.0 * PI / GRID as f64;
    let mut cdf = Vec::with_capacity(GRID + 1);
    cdf.push(0.0);
    let mut prev = pdf(-PI);
    let mut acc = 0.0;
    for i in 1..=GRID {
        let x = -PI + i as f64 * h;
        let mid = pdf(x - 0.5 * h);
        let cur = pdf(x);
        if !(prev.is_finite() && mid.is_finite() && cur.is_finite()) || prev < 0.0 || mid < 0.0 || cur < 0.0 {
            return Err(Error::invalid("pdf", "must be finite and non-negative"));
        }
        acc += h * (prev + 4.0 * mid + cur) / 6.0;
        cdf.push(acc);
        prev = cur;
    }
    if !(acc > 0.0) {
        return Err(Error::invalid("pdf", "integrates to zero"));
    }
    cdf.iter_mut().for_each(|c| *c /= acc);
    Ok(cdf)
}

fn interpolate(cdf: &[f64], x: f64) -> f64 {
    let h = 2.0 * PI / GRID as f64;
    let pos = ((x + PI) / h).clamp(0.0, GRID as f64);
    let i = (pos.floor() as usize).min(GRID - 1);
    let f = pos - i as f64;
    cdf[i] + f * (cdf[i + 1] - cdf[i])
}

/// Total-variation distance on [`DISTANCE_BINS`] bins and the
/// Kolmogorov–Smirnov statistic between relative-phase samples and a
/// reference. Both sample sets need at least [`MIN_DISTANCE_SAMPLES`] points.
pub fn distribution_distance(samples: &[f64], reference: DistanceReference<'_>) -> Result<Distances> {
    let check = |len: usize| {
        if len < MIN_DISTANCE_SAMPLES {
            Err(Error::InsufficientData(format!(
                "distribution distance needs at least {MIN_DISTANCE_SAMPLES} samples, got {len}"
            )))
        } else {
            Ok(())
        }
    };
    check(samples.len())?;
    let counts = histogram(samples, -PI, PI, DISTANCE_BINS)?;
    match reference {
        DistanceReference::Samples(other) => {
            check(other.len())?;
            let tv = total_variation(&counts, &histogram(other, -PI, PI, DISTANCE_BINS)?)?;
            let ks = ks_two_sample(samples, other)?;
            Ok(Distances {
                tv_distance: tv,
                ks_statistic: ks.statistic,
                ks_p_value: ks.p_value,
            })
        }
        DistanceReference::Pdf(pdf) => {
            let cdf = tabulate_cdf(pdf)?;
            let m = samples.len() as f64;
            let per_bin = GRID / DISTANCE_BINS;
            let tv = 0.5
                * counts
                    .iter()
                    .enumerate()
                    .map(|(b, &c)| (c as f64 / m - (cdf[(b + 1) * per_bin] - cdf[b * per_bin])).abs())
                    .sum::<f64>();
            let ks = ks_one_sample(samples, |x| interpolate(&cdf, x))?;
            Ok(Distances {
                tv_distance: tv,
                ks_statistic: ks.statistic,
                ks_p_value: ks.p_value,
            })
        }
    }
}
