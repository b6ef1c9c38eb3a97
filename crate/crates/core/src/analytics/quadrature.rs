//! Brute-force reference values for small XY rings by direct quadrature of
//! the Gibbs weight `exp(β Σ_k cos θ̃_k)`.
//!
//! The global rotation is gauged out, leaving the `N−1` independent bond
//! angles on a periodic grid of `m` points per axis; the last bond closes the
//! ring. Nested trapezoid sums over a periodic integrand converge
//! spectrally. Since the weight factorises over bonds, the nested sums are
//! evaluated as repeated circular convolutions of the single-bond weight.
//! Nothing here touches Bessel functions or transfer matrices.

use std::f64::consts::PI;

fn bond_weights(beta: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
    let angles: Vec<f64> = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
    let w = angles.iter().map(|a| (beta * a.cos()).exp()).collect();
    (angles, w)
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    let mut out = vec![0.0; m];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[(i + j) % m] += ai * bj;
        }
    }
    out
}

/// `k`-fold circular self-convolution of the bond weight (unnormalised sums).
fn power(w: &[f64], k: usize) -> Vec<f64> {
    let mut acc = w.to_vec();
    for _ in 1..k {
        acc = convolve(&acc, w);
    }
    acc
}

/// `Z / (2π)^N`, matching the transfer-matrix normalisation `Σ_n I_n(β)^N`.
pub fn partition_function(n_spins: usize, beta: f64, m: usize) -> f64 {
    assert!(n_spins >= 2 && m >= 4);
    let (_, w) = bond_weights(beta, m);
    let c = power(&w, n_spins);
    c[0] / (m as f64).powi(n_spins as i32 - 1)
}

/// Marginal density of a single bond angle at `theta_rel`.
pub fn relative_phase_pdf(theta_rel: f64, n_spins: usize, beta: f64, m: usize) -> f64 {
    assert!(n_spins >= 3 && m >= 4);
    let (angles, w) = bond_weights(beta, m);
    let z = partition_function(n_spins, beta, m);
    // the remaining N−1 bonds: N−2 on the grid, the last one fixed by closure
    let inner = power(&w, n_spins - 2);
    let mut s = 0.0;
    for (j, &cj) in inner.iter().enumerate() {
        s += cj * (beta * (theta_rel + angles[j]).cos()).exp();
    }
    (beta * theta_rel.cos()).exp() * s / (2.0 * PI * z * (m as f64).powi(n_spins as i32 - 2))
}

/// Gibbs average of `H = −Σ_k cos θ̃_k`.
pub fn mean_energy(n_spins: usize, beta: f64, m: usize) -> f64 {
    assert!(n_spins >= 2 && m >= 4);
    let (angles, w) = bond_weights(beta, m);
    let weighted: Vec<f64> = angles.iter().zip(&w).map(|(a, x)| a.cos() * x).collect();
    let rest = power(&w, n_spins - 1);
    let num = convolve(&weighted, &rest)[0];
    let den = convolve(&w, &rest)[0];
    -(n_spins as f64) * num / den
}
