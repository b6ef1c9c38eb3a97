use std::f64::consts::PI;

use nopo_xy::analytics::{
    bessel_i, bessel_i_scaled_orders, bessel_ratio_i1_i0, mean_energy_approx, mean_energy_exact, partition_function,
    quadrature, relative_phase_pdf_approx, relative_phase_pdf_exact, RingSpec, DEFAULT_N_MAX,
};
use proptest::prelude::*;

fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, m: usize) -> f64 {
    let h = (hi - lo) / m as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..m {
        s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

proptest! {
    #[test]
    fn bessel_recurrence(x in 0.05f64..60.0, n in 1usize..20) {
        let i = bessel_i_scaled_orders(n + 1, x).unwrap();
        let lhs = i[n - 1] - i[n + 1];
        let rhs = 2.0 * n as f64 / x * i[n];
        prop_assert!((lhs - rhs).abs() <= 1e-12 * i[n - 1].max(1e-300));
    }

    #[test]
    fn bessel_ratio_bounds(x in 1e-6f64..500.0) {
        let a = bessel_ratio_i1_i0(x).unwrap();
        prop_assert!(a > 0.0 && a < 1.0);
        prop_assert!(a < x / 2.0 + 1e-15);
        let direct = bessel_i(1, x.min(600.0)).unwrap() / bessel_i(0, x.min(600.0)).unwrap();
        prop_assert!((a - direct).abs() < 1e-12);
    }

    #[test]
    fn pdf_integrates_to_one(n in 3usize..40, beta in 0.0f64..20.0) {
        let spec = RingSpec::new(n, beta).unwrap();
        let total = simpson(|t| relative_phase_pdf_exact(t, &spec, DEFAULT_N_MAX).unwrap(), -PI, PI, 2000);
        prop_assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn small_rings_match_quadrature(n in 3usize..5, beta in 0.1f64..2.0) {
        let spec = RingSpec::new(n, beta).unwrap();
        let z = partition_function(&spec, DEFAULT_N_MAX).unwrap().exp();
        let zq = quadrature::partition_function(n, beta, 256);
        prop_assert!(((z - zq) / zq).abs() < 1e-8);
        let e = mean_energy_exact(&spec, DEFAULT_N_MAX).unwrap();
        prop_assert!(((e - quadrature::mean_energy(n, beta, 256)) / e).abs() < 1e-8);
    }

    #[test]
    fn large_rings_collapse(beta in 0.0f64..31.0, t in -PI..PI) {
        let spec = RingSpec::new(5000, beta).unwrap();
        let e = mean_energy_exact(&spec, DEFAULT_N_MAX).unwrap();
        prop_assert!((e - mean_energy_approx(5000, beta).unwrap()).abs() / 5000.0 < 1e-10);
        let p = relative_phase_pdf_exact(t, &spec, DEFAULT_N_MAX).unwrap();
        prop_assert!((p - relative_phase_pdf_approx(t, beta).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn energy_is_minus_derivative_of_log_partition() {
    let h = 1e-5;
    for (n, beta) in [(3usize, 0.7), (8, 2.0), (64, 5.7)] {
        let lz = |b: f64| partition_function(&RingSpec::new(n, b).unwrap(), DEFAULT_N_MAX).unwrap();
        let fd = -(lz(beta + h) - lz(beta - h)) / (2.0 * h);
        let e = mean_energy_exact(&RingSpec::new(n, beta).unwrap(), DEFAULT_N_MAX).unwrap();
        assert!((fd - e).abs() < 1e-6 * n as f64, "n={n} β={beta}: {fd} vs {e}");
    }
}

#[test]
fn infinite_temperature_is_uniform() {
    let spec = RingSpec::new(10, 0.0).unwrap();
    assert!((relative_phase_pdf_exact(1.0, &spec, DEFAULT_N_MAX).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-14);
    assert_eq!(mean_energy_exact(&spec, DEFAULT_N_MAX).unwrap(), 0.0);
}
