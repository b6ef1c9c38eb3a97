use nopo_xy::opo::{
    gain_saturation, integrate_signal_scalar, saturation_photon_number, steady_state_photon_number, threshold_pump,
    OpoParams,
};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn saturation_solves_the_cubic(x in 0.0f64..1e6) {
        let s = gain_saturation(x).unwrap();
        prop_assert!(s > 0.0 && s <= 1.0);
        prop_assert!((x * s * s * s + s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn saturation_decreases(x in 0.0f64..1e4, dx in 1e-3f64..10.0) {
        prop_assert!(gain_saturation(x + dx).unwrap() < gain_saturation(x).unwrap());
    }

    #[test]
    fn fixed_point_identity(r in 1.0001f64..20.0) {
        let p = OpoParams::with_pump_ratio(1e-3, 1.0, 1.0, 1.0, r).unwrap();
        let nss = steady_state_photon_number(&p).unwrap();
        let n0 = saturation_photon_number(&p).unwrap();
        prop_assert!((gain_saturation(nss / n0).unwrap() * r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn below_threshold_is_dark(r in 0.0f64..1.0) {
        let p = OpoParams::with_pump_ratio(1e-3, 1.0, 1.0, 1.0, r).unwrap();
        prop_assert_eq!(steady_state_photon_number(&p).unwrap(), 0.0);
    }

    #[test]
    fn pump_ratio_round_trips(r in 0.1f64..10.0) {
        let p = OpoParams::with_pump_ratio(2e-3, 1.5, 0.7, 0.3, r).unwrap();
        prop_assert!((p.pump_ratio().unwrap() - r).abs() < 1e-12 * r);
        prop_assert!((p.pump_amplitude / threshold_pump(&p).unwrap() - r).abs() < 1e-12 * r);
    }
}

#[test]
fn scalar_signal_relaxes_to_steady_state_and_keeps_phase() {
    let p = OpoParams::with_pump_ratio(1.0, 1e3, 1e3, 1.0, 3.0).unwrap();
    let nss = steady_state_photon_number(&p).unwrap();
    let a0 = Complex64::from_polar(1e-3 * nss.sqrt(), 1.1);
    let traj = integrate_signal_scalar(a0, &p, 0.01, 4000).unwrap();
    let last = traj.last().unwrap();
    assert!((last.norm_sqr() / nss - 1.0).abs() < 1e-8);
    assert!((last.arg() - 1.1).abs() < 1e-12);
}
