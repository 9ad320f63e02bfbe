use std::f64::consts::{FRAC_PI_2, PI};

use conesurf::corpus;
use conesurf::cylinders::{
    check_offsets, density_experiment, find_closed_geodesic, strip_quadrangle, ClosedSeed, CylinderError, DensityConfig, SearchBudget, Width,
};
use conesurf::{trace, GeodesicState, TraceOptions, Vec2};
use proptest::prelude::*;

/// Flat distance on the unit square torus.
fn torus_dist(d: Vec2) -> f64 {
    let w = |x: f64| (x - x.round()).abs();
    w(d.x).hypot(w(d.y))
}

/// `int_{-W}^{W} d(T + t u, T + t v) e^{-|t|} dt` for two lines through the same point.
fn line_distance(u: Vec2, v: Vec2, window: f64) -> f64 {
    let n = 200_000;
    let h = window / n as f64;
    let f = |t: f64| torus_dist((u - v) * t) * (-t.abs()).exp();
    let mut acc = f(0.0) + f(window);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(h * i as f64);
    }
    // the integrand is even in t
    2.0 * acc * h / 3.0
}

/// Frozen from a run that matched `line_distance` within quadrature error.
const FIB_DISTANCES: [f64; 7] = [
    0.41709962431696346,
    0.1725242937458055,
    0.06606951790457634,
    0.025245894331393667,
    0.00964360806287754,
    0.0036835602960195706,
    0.0014069964936462894,
];

#[test]
fn density_sequence_on_the_marked_torus() {
    let s = corpus::marked_torus();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let u = Vec2::new(1.0, phi).normalized().unwrap();
    let target = trace(&s, GeodesicState::new(0, Vec2::new(0.3, 0.2), u), TraceOptions::new(10.0)).unwrap();
    let fib = [1.0f64, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0];
    let lengths: Vec<f64> = fib.windows(2).map(|w| w[0].hypot(w[1]) + 1e-6).collect();
    let r = density_experiment(&s, &target, &DensityConfig::new(lengths, 5.0, 0.05)).unwrap();
    assert!(r.strictly_decreasing && r.pass);
    for ((st, w), frozen) in r.steps.iter().zip(fib.windows(2)).zip(FIB_DISTANCES) {
        let d = st.distance.unwrap();
        let v = Vec2::new(w[0], w[1]).normalized().unwrap();
        assert!((d - line_distance(u, v, 5.0)).abs() < 1e-6, "L = {}: {d}", st.length_bound);
        assert!((d - frozen).abs() < 1e-12);
        assert!((st.approximant_length.unwrap() - w[0].hypot(w[1])).abs() < 1e-9);
    }
}

#[test]
fn octagon_horizontal_cylinder() {
    let s = corpus::octagon();
    let seed = ClosedSeed::Direction { chart: 0, point: Vec2::new(0.0, 0.1), direction: Vec2::new(1.0, 0.0) };
    let c = find_closed_geodesic(&s, seed, SearchBudget::default()).unwrap();
    let (h, d) = (2.0 * (PI / 8.0).cos(), (PI / 8.0).sin());
    assert!((c.circumference - h).abs() < 1e-9);
    // the core is recentred, so both sides see the same distance
    assert!((c.width_left.value().unwrap() - d).abs() < 1e-9);
    assert!((c.width_right.value().unwrap() - d).abs() < 1e-9);
    assert!(check_offsets(&s, &c, &[0.25, 0.5, 0.75]).unwrap().iter().all(|o| o.matches));
}

#[test]
fn flat_torus_cylinders_are_unbounded() {
    let s = corpus::flat_torus();
    let seed = ClosedSeed::Direction { chart: 0, point: Vec2::new(0.5, 0.5), direction: Vec2::new(1.0, 2.0) };
    let c = find_closed_geodesic(&s, seed, SearchBudget::default()).unwrap();
    assert!((c.circumference - 5f64.sqrt()).abs() < 1e-9);
    assert_eq!(c.width_left, Width::Unbounded);
    assert_eq!(serde_json::to_string(&c.width_left).unwrap(), "\"unbounded\"");
    assert_eq!(serde_json::to_string(&Width::Finite(0.5)).unwrap(), "0.5");
}

#[test]
fn quadrangle_rejects_bad_input() {
    assert!(matches!(strip_quadrangle(2.0, 1.0, 0.5), Err(CylinderError::DomainError { .. })));
    assert!(matches!(strip_quadrangle(1.0, 1.0, FRAC_PI_2), Err(CylinderError::DomainError { .. })));
    assert!(matches!(strip_quadrangle(0.0, 1.0, 0.5), Err(CylinderError::DomainError { .. })));
    let q = strip_quadrangle(1.0, 2.0, PI / 6.0).unwrap();
    assert!((q.width - (2.0 + 1.0 / 3f64.sqrt())).abs() < 1e-12);
    assert!((q.length - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn quadrangle_formulas(delta in 1e-3f64..50.0, frac in 1e-3f64..=1.0, theta in 1e-4f64..FRAC_PI_2 - 1e-4) {
        let eps = frac * delta;
        let q = strip_quadrangle(eps, delta, theta).unwrap();
        prop_assert!((q.width - (delta + eps / (2.0 * theta.cos()))).abs() <= 1e-12 * q.width);
        prop_assert!((q.length - eps / (2.0 * theta.sin())).abs() <= 1e-12 * q.length);
        prop_assert!(q.width > delta + eps / 2.0);
    }
}
