use std::f64::consts::{FRAC_PI_2, PI, TAU};

use conesurf::cli::random_point;
use conesurf::corpus;
use conesurf::tracer::{collinearity_residual, develop, polyline_length, predict_self_intersection, sector_width, TraceEvent};
use conesurf::{trace, GeodesicState, TraceOptions, Vec2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seg_dist(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

fn lattice_distance(p0: Vec2, dir: Vec2, t: f64) -> f64 {
    let p1 = p0 + dir * t;
    let mut best = f64::INFINITY;
    for x in (p0.x.min(p1.x).floor() as i64 - 1)..=(p0.x.max(p1.x).ceil() as i64 + 1) {
        for y in (p0.y.min(p1.y).floor() as i64 - 1)..=(p0.y.max(p1.y).ceil() as i64 + 1) {
            best = best.min(seg_dist(Vec2::new(x as f64, y as f64), p0, p1));
        }
    }
    best
}

#[test]
fn golden_trace_matches_lattice_at_every_length() {
    let s = corpus::marked_torus();
    let p0 = Vec2::new(0.3, 0.2);
    let dir = Vec2::new(1.0, (1.0 + 5f64.sqrt()) / 2.0).normalized().unwrap();
    let r = trace(&s, GeodesicState::new(0, p0, dir), TraceOptions::new(100.0)).unwrap();
    for t in [1.0, 3.0, 10.0, 30.0, 55.0, 100.0] {
        assert!((r.min_distance_at(t) - lattice_distance(p0, dir, t)).abs() < 1e-9, "T = {t}");
    }
    for w in r.min_distance_series.windows(2) {
        assert!(w[1].1 <= w[0].1);
    }
}

#[test]
fn edges_from_every_octagon_vertex() {
    // directions along a chart edge may round to just outside the corner
    let s = corpus::octagon();
    let ch = &s.charts[0];
    for v in 0..8 {
        let d = ch.vertex(v + 1) - ch.vertex(v);
        let r = trace(&s, GeodesicState::new(0, ch.vertex(v), d), TraceOptions::new(1.0)).unwrap();
        assert_eq!(r.events.len(), 1);
        assert!(matches!(r.events[0], TraceEvent::ConeHit { .. }));
        assert!((r.total_length - d.norm()).abs() < 1e-12);
    }
}

#[test]
fn pillowcase_trace_reverses() {
    let s = corpus::pillowcase();
    let start = GeodesicState::new(0, Vec2::new(0.31, 0.57), Vec2::new(0.8, 0.35));
    let r = trace(&s, start, TraceOptions::new(7.5)).unwrap();
    let end = r.end_state();
    let back = trace(&s, GeodesicState::new(end.chart, end.point, -end.direction), TraceOptions::new(7.5)).unwrap();
    let home = back.end_state();
    assert_eq!(home.chart, 0);
    assert!(home.point.dist(start.point) < 1e-9);
    assert_eq!(r.segments.len(), back.segments.len());
}

#[test]
fn small_cone_points_stop_even_without_stop_flag() {
    let s = corpus::pillowcase();
    let r = trace(&s, GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(1.0, 1.0)), TraceOptions::new(5.0).stop_on_cone(false)).unwrap();
    assert!(matches!(r.events.last(), Some(TraceEvent::ConeHit { continued: None, .. })));
    assert!((r.total_length - 0.5f64.hypot(0.5)).abs() < 1e-12);
}

#[test]
fn self_intersection_prediction_spot_values() {
    let p = predict_self_intersection(1.0, FRAC_PI_2).unwrap();
    assert!((p.t_prime - 1.0).abs() < 1e-15);
    assert!((p.t - 2f64.sqrt()).abs() < 1e-15);
    assert!(predict_self_intersection(1.0, PI).is_err());
}

#[test]
fn random_octagon_traces_develop_straight() {
    let s = corpus::octagon();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 0..50 {
        let p = random_point(&s, 0, &mut rng);
        let r = trace(&s, GeodesicState::new(0, p, Vec2::from_angle(k as f64 * 0.37)), TraceOptions::new(40.0).sample_step(None)).unwrap();
        let dev = develop(&s, &r);
        assert!(collinearity_residual(&dev) / r.total_length <= 1e-8);
        assert!((polyline_length(&dev) - r.total_length).abs() <= 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sector_width_law(theta in 1e-3f64..40.0) {
        let w = sector_width(theta);
        if theta < TAU {
            prop_assert_eq!(w, 0.0);
        } else {
            prop_assert!((w - (theta - TAU)).abs() <= f64::EPSILON * theta);
        }
    }

    #[test]
    fn marked_torus_distance_is_lattice_distance(x in 0.01f64..0.99, y in 0.01f64..0.99, a in 0.0f64..TAU, len in 0.5f64..20.0) {
        let s = corpus::marked_torus();
        let dir = Vec2::from_angle(a);
        let r = trace(&s, GeodesicState::new(0, Vec2::new(x, y), dir), TraceOptions::new(len).sample_step(None)).unwrap();
        prop_assume!(r.cone_hit().is_none());
        prop_assert!((r.final_min_distance() - lattice_distance(Vec2::new(x, y), dir, len)).abs() < 1e-9);
    }

    #[test]
    fn arclength_is_additive(x in 0.05f64..0.95, y in 0.05f64..0.95, a in 0.0f64..TAU, len in 0.5f64..30.0) {
        let s = corpus::pillowcase();
        let r = trace(&s, GeodesicState::new(1, Vec2::new(x, y), Vec2::from_angle(a)), TraceOptions::new(len).sample_step(None)).unwrap();
        let summed: f64 = r.segments.iter().map(|g| g.length()).sum();
        prop_assert!((summed - r.total_length).abs() < 1e-9);
        for w in r.segments.windows(2) {
            prop_assert!((w[0].end_arclength() - w[1].start_arclength).abs() < 1e-12);
        }
    }
}
