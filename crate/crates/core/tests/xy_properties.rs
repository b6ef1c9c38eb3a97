use std::f64::consts::PI;

use nopo_xy::xy::{wrap_phase, xy_energy, xy_energy_gradient};
use nopo_xy::{CouplingGraph, PhaseConfig};
use proptest::prelude::*;

fn phases(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-PI..PI, n)
}

fn circ_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

proptest! {
    #[test]
    fn wrap_lands_in_principal_range(x in -1e3f64..1e3) {
        let w = wrap_phase(x).unwrap();
        prop_assert!((-PI..PI).contains(&w));
        prop_assert!(circ_gap(w, x) < 1e-9);
    }

    #[test]
    fn energy_is_rotation_invariant(theta in phases(12), offset in -10.0f64..10.0) {
        let graph = CouplingGraph::ring(12, 1.0).unwrap();
        let c = PhaseConfig::new(theta).unwrap();
        let e0 = xy_energy(&c, &graph).unwrap().value();
        let e1 = xy_energy(&c.rotated(offset).unwrap(), &graph).unwrap().value();
        prop_assert!((e0 - e1).abs() < 1e-9);
    }

    #[test]
    fn relative_phases_are_rotation_invariant(theta in phases(9), offset in -10.0f64..10.0) {
        let c = PhaseConfig::new(theta).unwrap();
        let a = c.ring_relative_phases();
        let b = c.rotated(offset).unwrap().ring_relative_phases();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(circ_gap(*x, *y) < 1e-9);
        }
    }

    #[test]
    fn energy_is_bounded_by_total_weight(theta in phases(10), j in -2.0f64..2.0) {
        let graph = CouplingGraph::ring(10, j).unwrap();
        let e = xy_energy(&PhaseConfig::new(theta).unwrap(), &graph).unwrap().value();
        prop_assert!(e.abs() <= graph.total_abs_weight() + 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences(theta in phases(7), k in 0usize..7) {
        let graph = CouplingGraph::chain(7, 0.7).unwrap();
        let c = PhaseConfig::new(theta.clone()).unwrap();
        let g = xy_energy_gradient(&c, &graph).unwrap();
        let h = 1e-6;
        let shifted = |d: f64| {
            let mut t = theta.clone();
            t[k] += d;
            xy_energy(&PhaseConfig::new(t).unwrap(), &graph).unwrap().value()
        };
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        prop_assert!((fd - g[k]).abs() < 1e-6);
    }

    #[test]
    fn gradient_sums_to_zero(theta in phases(16)) {
        let graph = CouplingGraph::ring(16, 1.3).unwrap();
        let g = xy_energy_gradient(&PhaseConfig::new(theta).unwrap(), &graph).unwrap();
        prop_assert!(g.iter().sum::<f64>().abs() < 1e-9);
    }
}

#[test]
fn single_precision_energy_tracks_double() {
    let theta: Vec<f64> = (0..32).map(|k| (k as f64 * 0.37).sin() * 3.0).collect();
    let c64 = PhaseConfig::new(theta.clone()).unwrap();
    let c32 = nopo_xy::PhaseConfig32::new(theta.iter().map(|&t| t as f32).collect()).unwrap();
    let e64 = xy_energy(&c64, &CouplingGraph::ring(32, 1.0).unwrap()).unwrap().value();
    let e32 = xy_energy(&c32, &nopo_xy::CouplingGraph32::ring(32, 1.0).unwrap()).unwrap().value();
    assert!((e64 - e32 as f64).abs() < 1e-4);
}

#[test]
fn aligned_ring_is_ground_state() {
    let graph = CouplingGraph::ring(50, 1.0).unwrap();
    let e = xy_energy(&PhaseConfig::aligned(50, 0.3).unwrap(), &graph).unwrap().value();
    assert!((e + 50.0).abs() < 1e-12);
}
