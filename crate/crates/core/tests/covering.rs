use std::f64::consts::{PI, TAU};

use conesurf::corpus;
use conesurf::covering::{build_cover, class_monodromy, lift_order, lift_trace, project_trace, riemann_hurwitz_check, search_monodromy, BranchMode, CoverSpec};
use conesurf::perm::Permutation;
use conesurf::{trace, ConeSurface, GeodesicState, TraceOptions, Vec2};
use proptest::prelude::*;

/// V - E + F of a glued polygon complex, counted directly.
fn cell_count(s: &ConeSurface) -> i64 {
    s.vertex_classes.len() as i64 - s.gluings.len() as i64 + s.charts.len() as i64
}

fn perm(d: usize) -> impl Strategy<Value = Permutation> {
    Just((0..d).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn spec_strategy() -> impl Strategy<Value = CoverSpec> {
    (2usize..=4).prop_flat_map(|d| proptest::collection::vec(perm(d), 4).prop_map(move |ps| {
        ps.into_iter().enumerate().fold(CoverSpec::trivial(d), |spec, (g, p)| spec.with(g, p))
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_pillowcase_covers_obey_riemann_hurwitz(spec in spec_strategy()) {
        let base = corpus::pillowcase();
        let cover = build_cover(&base, &spec).unwrap();
        let r = &cover.report;
        prop_assert_eq!(riemann_hurwitz_check(r), 0);
        prop_assert!(cover.surface.validate_gauss_bonnet().residual < 1e-9);
        if r.connected {
            prop_assert_eq!(r.euler_characteristic, cell_count(&cover.surface));
            prop_assert!((cover.surface.total_area() - spec.degree as f64 * base.total_area()).abs() < 1e-9);
            for b in &r.base {
                let above: usize = r.cover.iter().filter(|c| c.base_class == b.class).map(|c| c.local_degree).sum();
                prop_assert_eq!(above, spec.degree);
                prop_assert_eq!(b.cycle_type.iter().sum::<usize>(), spec.degree);
            }
            for c in &r.cover {
                prop_assert!((c.angle - c.local_degree as f64 * PI).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn triple_cover_found_by_search() {
    let base = corpus::pillowcase();
    let spec = search_monodromy(&base, 3, BranchMode::Strict, 1_000_000).unwrap();
    for c in 0..4 {
        assert_eq!(class_monodromy(&base, &spec, c).cycle_type(), vec![3]);
    }
    let cover = build_cover(&base, &spec).unwrap();
    assert_eq!(cover.report.euler_characteristic, -2);
    assert_eq!(cell_count(&cover.surface), -2);
    assert_eq!(cover.surface.charts.len(), 6);
    assert!(cover.surface.vertex_classes.iter().all(|c| (c.angle - 3.0 * PI).abs() < 1e-9));

    let text = spec.to_json();
    assert_eq!(CoverSpec::from_json(&text, Some(3)).unwrap(), spec);
}

#[test]
fn lifts_project_back() {
    let base = corpus::pillowcase();
    let spec = search_monodromy(&base, 3, BranchMode::Strict, 1_000_000).unwrap();
    let cover = build_cover(&base, &spec).unwrap();
    let r = trace(&base, GeodesicState::new(0, Vec2::new(0.2, 0.35), Vec2::from_angle(0.3)), TraceOptions::new(25.0)).unwrap();
    assert!(r.cone_hit().is_none());
    for sheet in 0..3 {
        let l = lift_trace(&base, &cover, &r, sheet).unwrap();
        assert_eq!(cover.project_chart(l.segments[0].chart), (0, sheet));
        for ((c, a, b), g) in project_trace(&cover, &l).iter().zip(&r.segments) {
            assert_eq!(*c, g.chart);
            assert!(a.dist(g.start) < 1e-12 && b.dist(g.end) < 1e-12);
        }
        assert!((l.total_length - r.total_length).abs() < 1e-12);
    }
}

#[test]
fn closed_geodesic_lifts_to_a_closed_geodesic() {
    // the horizontal circle of the pillowcase has length 2 and trivial holonomy
    let base = corpus::pillowcase();
    let spec = search_monodromy(&base, 3, BranchMode::Strict, 1_000_000).unwrap();
    let cover = build_cover(&base, &spec).unwrap();
    let r = trace(&base, GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(1.0, 0.0)), TraceOptions::new(10.0).detect_recurrence(true)).unwrap();
    assert_eq!(r.period.map(|p| (p * 1e9).round()), Some(2e9));
    let k = lift_order(&cover, &r, 0);
    assert!((1..=3).contains(&k));
    let lifted = trace(&cover.surface, GeodesicState::new(cover.lift_chart(0, 0).unwrap(), Vec2::new(0.5, 0.5), Vec2::new(1.0, 0.0)), TraceOptions::new(20.0).detect_recurrence(true)).unwrap();
    assert!((lifted.period.unwrap() - 2.0 * k as f64).abs() < 1e-9);
}

#[test]
fn torus_covers_are_unbranched() {
    let base = corpus::flat_torus();
    let spec = CoverSpec::trivial(2).with(0, Permutation::swap(2, 0, 1));
    let cover = build_cover(&base, &spec).unwrap();
    assert_eq!(cover.report.euler_characteristic, 0);
    assert!(cover.surface.vertex_classes.iter().all(|c| (c.angle - TAU).abs() < 1e-9));
    assert!((cover.surface.total_area() - 2.0).abs() < 1e-12);
}
