//! Modified Bessel functions of the first kind for integer order.
//!
//! `I₀` comes from the ascending series for `x ≤ 20` and from the Hankel
//! asymptotic expansion above; higher orders are built from the ratios
//! `I_n/I_{n−1}`, obtained by backward recurrence from a starting order deep
//! enough for the minimal solution to have converged. Everything is carried
//! in the exponentially scaled form `e^{−x} I_n(x)`.

use crate::{Error, Result};

const SERIES_LIMIT: f64 = 20.0;

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::NonFinite("x"));
    }
    if x < 0.0 {
        return Err(Error::invalid("x", format!("must be non-negative, got {x}")));
    }
    if x.is_infinite() {
        return Err(Error::NonFinite("x"));
    }
    Ok(())
}

/// `e^{−x} I₀(x)`.
fn i0_scaled(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // Σ_k [(2k−1)!!]² / (k! 8^k x^k), all terms positive for ν = 0;
        // stop at machine precision or before the terms start growing
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        loop {
            let ratio = (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
            if ratio >= 1.0 {
                break;
            }
            term *= ratio;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

/// Above this argument the backward recurrence would need `O(√x)` steps.
const HANKEL_RATIO_LIMIT: f64 = 1e6;

/// `√(2πx) e^{−x} I_n(x)` from the Hankel expansion; accurate for `n² ≪ x`.
fn hankel_scaled(n: usize, x: f64) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..30 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Ratios `I_n(x)/I_{n−1}(x)` for `n = 1..=n_max`, by backward recurrence
/// `ρ_n = 1 / (2n/x + ρ_{n+1})` seeded with zero far above `n_max`.
fn ratios(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        return out;
    }
    if x > HANKEL_RATIO_LIMIT && (n_max * n_max) as f64 <= 1e-3 * x {
        let mut prev = hankel_scaled(0, x);
        for (n, slot) in out.iter_mut().enumerate().skip(1) {
            let next = hankel_scaled(n, x);
            *slot = next / prev;
            prev = next;
        }
        return out;
    }
    // the seeding error at order n shrinks roughly like exp(−(M² − n²)/x)
    let start = n_max + 30 + (60.0 * x).sqrt().ceil() as usize;
    let mut rho = 0.0;
    for n in (1..=start).rev() {
        rho = 1.0 / (2.0 * n as f64 / x + rho);
        if n <= n_max {
            out[n] = rho;
        }
    }
    out
}

/// `e^{−x} I_n(x)` for every order `0..=n_max`.
pub fn bessel_i_scaled_orders(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_arg(x)?;
    let mut out = Vec::with_capacity(n_max + 1);
    if x == 0.0 {
        out.push(1.0);
        out.extend(std::iter::repeat_n(0.0, n_max));
        return Ok(out);
    }
    let rho = ratios(n_max, x);
    let mut v = i0_scaled(x);
    out.push(v);
    for r in rho.iter().skip(1) {
        v *= r;
        out.push(v);
    }
    Ok(out)
}

/// Exponentially scaled `e^{−x} I_n(x)`; negative orders use `I_{−n} = I_n`.
pub fn bessel_i_scaled(n: i32, x: f64) -> Result<f64> {
    let n = n.unsigned_abs() as usize;
    Ok(bessel_i_scaled_orders(n, x)?[n])
}

/// `I_n(x)`. Finite for `x ≤ 700`; larger arguments overflow and are
/// reported as an error (use [`bessel_i_scaled`] there).
pub fn bessel_i(n: i32, x: f64) -> Result<f64> {
    check_arg(x)?;
    if x > 700.0 {
        return Err(Error::Overflow(format!(
            "I_{n}({x}) exceeds the f64 range; use the scaled variant"
        )));
    }
    Ok(bessel_i_scaled(n, x)? * x.exp())
}

/// `I₁(x)/I₀(x)`, the mean resultant length of a von Mises law with
/// concentration `x`.
pub fn bessel_ratio_i1_i0(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(ratios(1, x)[1])
}
