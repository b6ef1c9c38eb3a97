use super::mean_std;
use crate::network::TrajectoryRecord;
use crate::{Error, Result};

/// Points of the decay curve below this value are left out of the fit.
pub const FIT_FLOOR: f64 = 0.1;

/// Ensemble average of `cos(θ̃_k(t) − θ̃_k(0))` over relative phases.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub times: Vec<f64>,
    pub mean_cosine: Vec<f64>,
    pub n_samples: Vec<usize>,
    /// Standard error of each point, from the spread of per-trajectory means
    /// (or of per-spin values for a single trajectory).
    pub std_error: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionFit {
    pub d_theta: f64,
    pub std_error: f64,
    pub n_points: usize,
}

/// Builds the cosine decay curve of the ring relative phases. All
/// trajectories must share their sample times and the first must be `t = 0`.
pub fn decay_curve(ensemble: &[TrajectoryRecord<f64>]) -> Result<DecayCurve> {
    let first = ensemble
        .first()
        .ok_or_else(|| Error::InsufficientData("empty ensemble".into()))?;
    let times = first.sample_times.clone();
    if times.len() < 2 {
        return Err(Error::InsufficientData("decay curve needs at least 2 time points".into()));
    }
    if times[0].abs() > 1e-15 {
        return Err(Error::MissingSnapshot(0.0));
    }
    if ensemble.iter().any(|r| r.sample_times != times) {
        return Err(Error::invalid("ensemble", "trajectories must share sample times"));
    }
    let m = ensemble.len();
    let per_traj: Vec<Vec<Vec<f64>>> = ensemble
        .iter()
        .map(|r| {
            let base = r.snapshots[0].ring_relative_phases();
            r.snapshots
                .iter()
                .map(|s| {
                    s.ring_relative_phases()
                        .iter()
                        .zip(&base)
                        .map(|(a, b)| (a - b).cos())
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut mean_cosine = Vec::with_capacity(times.len());
    let mut n_samples = Vec::with_capacity(times.len());
    let mut std_error = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        let (mean, _, n) = mean_std(per_traj.iter().flat_map(|t| t[i].iter().copied()));
        let se = if m > 1 {
            let (_, sd, _) = mean_std(per_traj.iter().map(|t| t[i].iter().sum::<f64>() / t[i].len() as f64));
            sd / (m as f64).sqrt()
        } else {
            let (_, sd, k) = mean_std(per_traj[0][i].iter().copied());
            sd / (k as f64).sqrt()
        };
        mean_cosine.push(mean);
        n_samples.push(n);
        std_error.push(se);
    }
    Ok(DecayCurve {
        times,
        mean_cosine,
        n_samples,
        std_error,
    })
}

/// Least-squares fit of `−ln⟨cos⟩ = D_θ t` through the origin over points
/// with `t > 0` and `⟨cos⟩ ≥ 0.1`.
///
/// The standard error combines the scatter of the residuals with the
/// propagated per-point errors, taking the larger.
pub fn fit_diffusion(curve: &DecayCurve) -> Result<DiffusionFit> {
    if curve.times.len() < 3 {
        return Err(Error::InsufficientData("diffusion fit needs at least 3 time points".into()));
    }
    let pts: Vec<(f64, f64, f64)> = curve
        .times
        .iter()
        .zip(&curve.mean_cosine)
        .zip(&curve.std_error)
        .filter(|((&t, &c), _)| t > 0.0 && c >= FIT_FLOOR)
        .map(|((&t, &c), &se)| (t, -c.ln(), se / c))
        .collect();
    if pts.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no decay points at or above {FIT_FLOOR}"
        )));
    }
    let stt: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let d = pts.iter().map(|p| p.0 * p.1).sum::<f64>() / stt;
    let propagated = pts.iter().map(|p| (p.0 * p.2).powi(2)).sum::<f64>().sqrt() / stt;
    let resid = if pts.len() > 1 {
        let rss: f64 = pts.iter().map(|p| (p.1 - d * p.0).powi(2)).sum();
        (rss / (pts.len() - 1) as f64 / stt).sqrt()
    } else {
        0.0
    };
    Ok(DiffusionFit {
        d_theta: d,
        std_error: propagated.max(resid),
        n_points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(d: f64, times: &[f64]) -> DecayCurve {
        DecayCurve {
            times: times.to_vec(),
            mean_cosine: times.iter().map(|t| (-d * t).exp()).collect(),
            n_samples: vec![1; times.len()],
            std_error: vec![0.0; times.len()],
        }
    }

    #[test]
    fn exact_curve_recovers_rate() {
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 2e-4).collect();
        let fit = fit_diffusion(&synthetic(440.0, &times)).unwrap();
        assert!((fit.d_theta / 440.0 - 1.0).abs() < 1e-6);
        // exp(-440 * 3.8e-3) = 0.19, so every point is inside the window
        assert_eq!(fit.n_points, 19);
    }

    #[test]
    fn time_rescaling() {
        let times: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let mut c = synthetic(1.3, &times);
        c.mean_cosine[3] *= 0.97;
        let a = fit_diffusion(&c).unwrap();
        c.times.iter_mut().for_each(|t| *t *= 8.0);
        let b = fit_diffusion(&c).unwrap();
        assert!((b.d_theta * 8.0 / a.d_theta - 1.0).abs() < 1e-13);
    }

    #[test]
    fn floor_and_size_errors() {
        assert!(fit_diffusion(&synthetic(1.0, &[0.0, 1.0])).is_err());
        assert!(fit_diffusion(&synthetic(10.0, &[0.0, 1.0, 2.0])).is_err());
    }
}
