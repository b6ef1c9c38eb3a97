//! Single-oscillator physics: the pump/signal/idler four-wave-mixing
//! equations, their adiabatic reduction to one signal equation, the gain
//! saturation function and the steady-state photon number.
//!
//! All quantities are in normalized units: field amplitudes are scaled so
//! that `|a|²` is a photon number, rates share one time unit.

use num_complex::Complex64;

use crate::{Error, Result};

/// Step-size bound for the explicit integrators: `dt · rate < 0.1`.
pub const STABILITY_LIMIT: f64 = 0.1;

/// Rate constants and pump drive of one NOPO.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OpoParams {
    pub gamma_s: f64,
    pub gamma_i: f64,
    pub gamma_p: f64,
    pub kappa: f64,
    /// `|F_p|`, the external pump amplitude.
    pub pump_amplitude: f64,
}

impl OpoParams {
    pub fn new(gamma_s: f64, gamma_i: f64, gamma_p: f64, kappa: f64, pump_amplitude: f64) -> Result<Self> {
        let p = Self {
            gamma_s,
            gamma_i,
            gamma_p,
            kappa,
            pump_amplitude,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same rates with the pump set to `ratio` times threshold.
    pub fn with_pump_ratio(gamma_s: f64, gamma_i: f64, gamma_p: f64, kappa: f64, ratio: f64) -> Result<Self> {
        if !(ratio >= 0.0) || !ratio.is_finite() {
            return Err(Error::invalid("pump_ratio", "must be finite and non-negative"));
        }
        let mut p = Self::new(gamma_s, gamma_i, gamma_p, kappa, 0.0)?;
        p.pump_amplitude = ratio * threshold_pump(&p)?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_s", self.gamma_s),
            ("gamma_i", self.gamma_i),
            ("gamma_p", self.gamma_p),
            ("kappa", self.kappa),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
            if v <= 0.0 {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !self.pump_amplitude.is_finite() || self.pump_amplitude < 0.0 {
            return Err(Error::invalid("pump_amplitude", "must be finite and non-negative"));
        }
        Ok(())
    }

    /// `γ_s ≪ γ_p, γ_i`, read as a separation of at least two decades.
    pub fn is_adiabatic_regime(&self) -> bool {
        self.gamma_s <= 1e-2 * self.gamma_p.min(self.gamma_i)
    }

    /// `|F_p| / F_p^(th)`.
    pub fn pump_ratio(&self) -> Result<f64> {
        Ok(self.pump_amplitude / threshold_pump(self)?)
    }
}

/// Gain saturation `s(x)`: the real root of `x s³ + s = 1`, written in
/// closed form with real cube roots.
///
/// Both radicands `∓√x/2 + √(x/4 + 1/27)` are non-negative; their product is
/// `1/27`, so the smaller one is formed from the larger to avoid cancellation.
pub fn gain_saturation(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NonFinite("x"));
    }
    if x < 0.0 {
        return Err(Error::invalid("x", format!("must be non-negative, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let root = (x / 4.0 + 1.0 / 27.0).sqrt();
    let upper = (x.sqrt() / 2.0 + root).cbrt();
    let lower = 1.0 / (3.0 * upper);
    let v = lower - upper;
    Ok(1.0 / (1.0 + v * v))
}

/// Pump amplitude at the oscillation threshold,
/// `F_p^(th) = (γ_p √(γ_s γ_i) / 4κ)^{1/2}`.
///
/// This is where the small-signal gain of the three-field equations exactly
/// balances the signal loss.
pub fn threshold_pump(params: &OpoParams) -> Result<f64> {
    params.validate()?;
    Ok((params.gamma_p * (params.gamma_s * params.gamma_i).sqrt() / (4.0 * params.kappa)).sqrt())
}

/// Saturation photon number `n₀ = γ_p² γ_i / (8 κ² |F_p|²)`.
pub fn saturation_photon_number(params: &OpoParams) -> Result<f64> {
    params.validate()?;
    if params.pump_amplitude <= 0.0 {
        return Err(Error::invalid("pump_amplitude", "n0 is undefined at zero pump"));
    }
    let f = params.pump_amplitude;
    Ok(params.gamma_p.powi(2) * params.gamma_i / (8.0 * params.kappa.powi(2) * f * f))
}

/// Steady-state signal photon number, `n₀[(r−1)^{3/2} + (r−1)^{1/2}]²`
/// above threshold and zero at or below it.
pub fn steady_state_photon_number(params: &OpoParams) -> Result<f64> {
    let r = params.pump_ratio()?;
    if r <= 1.0 {
        return Ok(0.0);
    }
    let n0 = saturation_photon_number(params)?;
    let e = r - 1.0;
    Ok(n0 * (e.powf(1.5) + e.sqrt()).powi(2))
}

/// Precomputed pump-dependent constants for the reduced signal equation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SignalGain {
    pub gamma_s: f64,
    pub ratio: f64,
    pub n0: f64,
}

impl SignalGain {
    pub fn new(params: &OpoParams) -> Result<Self> {
        let ratio = params.pump_ratio()?;
        let n0 = if params.pump_amplitude > 0.0 {
            saturation_photon_number(params)?
        } else {
            f64::INFINITY
        };
        Ok(Self {
            gamma_s: params.gamma_s,
            ratio,
            n0,
        })
    }

    /// `(s(n/n₀)·r)⁴ − 1`, the net gain factor.
    #[inline]
    pub fn net_gain(&self, photon_number: f64) -> f64 {
        if self.ratio == 0.0 {
            return -1.0;
        }
        let x = (photon_number / self.n0).max(0.0);
        // gain_saturation only fails on negative or NaN input
        let s = gain_saturation(x).unwrap_or(f64::NAN);
        (s * self.ratio).powi(4) - 1.0
    }
}

/// Pump, signal and idler amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeFieldState {
    pub a_p: Complex64,
    pub a_s: Complex64,
    pub a_i: Complex64,
}

impl ThreeFieldState {
    pub fn is_finite(&self) -> bool {
        self.a_p.is_finite() && self.a_s.is_finite() && self.a_i.is_finite()
    }

    pub fn signal_photon_number(&self) -> f64 {
        self.a_s.norm_sqr()
    }

    fn axpy(&self, h: f64, k: &ThreeFieldState) -> ThreeFieldState {
        ThreeFieldState {
            a_p: self.a_p + k.a_p * h,
            a_s: self.a_s + k.a_s * h,
            a_i: self.a_i + k.a_i * h,
        }
    }
}

fn three_field_rhs(x: &ThreeFieldState, p: &OpoParams) -> ThreeFieldState {
    let drive = p.gamma_p.sqrt() * p.pump_amplitude;
    let ap2 = x.a_p * x.a_p;
    ThreeFieldState {
        a_p: -0.5 * p.gamma_p * x.a_p - p.kappa * x.a_p.conj() * x.a_s * x.a_i + drive,
        a_s: -0.5 * p.gamma_s * x.a_s + 0.5 * p.kappa * x.a_i.conj() * ap2,
        a_i: -0.5 * p.gamma_i * x.a_i + 0.5 * p.kappa * x.a_s.conj() * ap2,
    }
}

fn check_step(dt: f64, rates: &[(&'static str, f64)]) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", format!("must be positive and finite, got {dt}")));
    }
    for &(name, rate) in rates {
        let product = dt * rate;
        if product >= STABILITY_LIMIT {
            return Err(Error::Unstable {
                rate: name,
                product,
                limit: STABILITY_LIMIT,
            });
        }
    }
    Ok(())
}

/// Integrates the three coupled field equations with a real constant pump
/// drive using fixed-step classical Runge–Kutta. Returns `n_steps + 1`
/// states, the first being `initial`.
pub fn integrate_three_field(
    initial: ThreeFieldState,
    params: &OpoParams,
    dt: f64,
    n_steps: usize,
) -> Result<Vec<ThreeFieldState>> {
    params.validate()?;
    check_step(
        dt,
        &[
            ("gamma_p", params.gamma_p),
            ("gamma_i", params.gamma_i),
            ("gamma_s", params.gamma_s),
        ],
    )?;
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial"));
    }
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(initial);
    let mut x = initial;
    for step in 0..n_steps {
        let k1 = three_field_rhs(&x, params);
        let k2 = three_field_rhs(&x.axpy(0.5 * dt, &k1), params);
        let k3 = three_field_rhs(&x.axpy(0.5 * dt, &k2), params);
        let k4 = three_field_rhs(&x.axpy(dt, &k3), params);
        x = ThreeFieldState {
            a_p: x.a_p + (k1.a_p + 2.0 * k2.a_p + 2.0 * k3.a_p + k4.a_p) * (dt / 6.0),
            a_s: x.a_s + (k1.a_s + 2.0 * k2.a_s + 2.0 * k3.a_s + k4.a_s) * (dt / 6.0),
            a_i: x.a_i + (k1.a_i + 2.0 * k2.a_i + 2.0 * k3.a_i + k4.a_i) * (dt / 6.0),
        };
        if !x.is_finite() {
            return Err(Error::Diverged { step: step as u64 + 1 });
        }
        out.push(x);
    }
    Ok(out)
}

/// Integrates the adiabatically reduced signal equation
/// `da/dt = (γ_s/2)[(s(|a|²/n₀)·r)⁴ − 1] a` with fixed-step Runge–Kutta.
///
/// Above threshold `a = 0` is an unstable fixed point, so a zero seed is
/// rejected.
pub fn integrate_signal_scalar(
    initial: Complex64,
    params: &OpoParams,
    dt: f64,
    n_steps: usize,
) -> Result<Vec<Complex64>> {
    params.validate()?;
    check_step(dt, &[("gamma_s", params.gamma_s)])?;
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial"));
    }
    let gain = SignalGain::new(params)?;
    if initial == Complex64::new(0.0, 0.0) && gain.ratio > 1.0 {
        return Err(Error::invalid(
            "initial",
            "zero field is an unstable fixed point above threshold; seed a nonzero amplitude",
        ));
    }
    // the right-hand side is a real multiple of `a`, so only |a|² and a real
    // scale factor need integrating; this keeps the phase exactly fixed
    let rate = |n: f64| 0.5 * gain.gamma_s * gain.net_gain(n);
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(initial);
    let mut a = initial;
    for step in 0..n_steps {
        let m = a.norm();
        let f = |m: f64| rate(m * m) * m;
        let k1 = f(m);
        let k2 = f(m + 0.5 * dt * k1);
        let k3 = f(m + 0.5 * dt * k2);
        let k4 = f(m + dt * k3);
        let next = m + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() {
            return Err(Error::Diverged { step: step as u64 + 1 });
        }
        a = if m > 0.0 { a * (next / m) } else { a };
        out.push(a);
    }
    Ok(out)
}
