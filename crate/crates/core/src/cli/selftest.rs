use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus;
use crate::covering::{build_cover, lift_trace, search_monodromy, BranchMode, DEFAULT_SEARCH_BUDGET};
use crate::cylinders::strip_quadrangle;
use crate::geom::{contains_point, point_segment_distance, Vec2};
use crate::surface::ConeSurface;
use crate::tracer::{collinearity_residual, develop, polyline_length, sector_width, trace, GeodesicState, TraceOptions};

use super::{CliError, Out, SelftestArgs};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn check(name: &'static str, cases: usize, max_error: f64, limit: f64) -> Check {
    Check { name, cases, max_error, limit, pass: max_error <= limit }
}

/// A uniformly random interior point of chart `chart`.
pub fn random_point(s: &ConeSurface, chart: usize, rng: &mut impl Rng) -> Vec2 {
    let v = &s.charts[chart].vertices;
    let (lo, hi) = v.iter().fold((v[0], v[0]), |(lo, hi), p| {
        (Vec2::new(lo.x.min(p.x), lo.y.min(p.y)), Vec2::new(hi.x.max(p.x), hi.y.max(p.y)))
    });
    loop {
        let p = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        let clear = (0..v.len()).all(|i| point_segment_distance(p, v[i], v[(i + 1) % v.len()]).0 > 1e-6);
        if clear && contains_point(v, p, 0.0) {
            return p;
        }
    }
}

/// Run every randomized check with the given seed.
pub fn selftest(seed: u64, samples: usize) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let corpus_list = corpus::named();
    let gb = corpus_list.iter().map(|(_, s)| s.validate_gauss_bonnet().residual).fold(0.0, f64::max);
    checks.push(check("gauss_bonnet", corpus_list.len(), gb, 1e-9));

    let mut sector = 0.0f64;
    let mut classes = 0;
    for (_, s) in &corpus_list {
        for c in &s.vertex_classes {
            classes += 1;
            sector = sector.max((sector_width(c.angle) - (c.angle - TAU).max(0.0)).abs());
        }
    }
    checks.push(check("sector_width", classes, sector, f64::EPSILON * 8.0 * TAU));

    let mut quad = 0.0f64;
    for _ in 0..samples {
        let delta = rng.gen_range(1e-3..10.0);
        let eps = rng.gen_range(1e-4..=delta);
        let theta = rng.gen_range(1e-3..FRAC_PI_2 - 1e-3);
        let q = strip_quadrangle(eps, delta, theta).expect("inputs in range");
        let e = (q.width - (delta + eps / (2.0 * theta.cos()))).abs().max((q.length - eps / (2.0 * theta.sin())).abs());
        quad = quad.max(if q.width > delta + eps / 2.0 { e } else { f64::INFINITY });
    }
    checks.push(check("quadrangle", samples, quad, 1e-12));

    let oct = corpus::octagon();
    let (mut coll, mut additivity) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let p = random_point(&oct, 0, &mut rng);
        let a = rng.gen_range(0.0..TAU);
        let len = rng.gen_range(1.0..20.0);
        let r = trace(&oct, GeodesicState::new(0, p, Vec2::from_angle(a)), TraceOptions::new(len).sample_step(None)).expect("interior start");
        let dev = develop(&oct, &r);
        coll = coll.max(collinearity_residual(&dev) / r.total_length.max(1.0));
        additivity = additivity.max((polyline_length(&dev) - r.total_length).abs());
    }
    checks.push(check("developed_collinearity", samples, coll, oct.tol.dev));
    checks.push(check("arclength_additivity", samples, additivity, 1e-7));

    let pc = corpus::pillowcase();
    let lifted = search_monodromy(&pc, 3, BranchMode::Strict, DEFAULT_SEARCH_BUDGET)
        .ok()
        .and_then(|spec| build_cover(&pc, &spec).ok());
    let mut proj = f64::INFINITY;
    let mut cases = 0;
    if let Some(cover) = lifted {
        proj = 0.0;
        while cases < samples {
            let chart = rng.gen_range(0..pc.charts.len());
            let p = random_point(&pc, chart, &mut rng);
            let r = trace(&pc, GeodesicState::new(chart, p, Vec2::from_angle(rng.gen_range(0.0..TAU))), TraceOptions::new(rng.gen_range(0.1..2.0)).sample_step(None))
                .expect("interior start");
            if r.cone_hit().is_some() {
                continue;
            }
            cases += 1;
            let sheet = rng.gen_range(0..3);
            let Ok(l) = lift_trace(&pc, &cover, &r, sheet) else {
                proj = f64::INFINITY;
                break;
            };
            for (a, b) in l.segments.iter().zip(&r.segments) {
                let same_chart = cover.project_chart(a.chart).0 == b.chart;
                proj = proj.max(if same_chart { a.start.dist(b.start).max(a.end.dist(b.end)) } else { f64::INFINITY });
            }
            proj = proj.max((l.total_length - r.total_length).abs());
        }
    }
    checks.push(check("cover_projection", cases, proj, 1e-9));

    let pass = checks.iter().all(|c| c.pass);
    SelftestReport { seed, samples, checks, pass }
}

pub fn run_selftest(a: &SelftestArgs, out: &Out) -> Result<(), CliError> {
    let r = selftest(a.seed, a.samples);
    let mut text = format!("seed {}  samples {}\n", r.seed, r.samples);
    for c in &r.checks {
        let _ = writeln!(text, "{} {:<24} cases {:>5}  max error {:.3e}  limit {:.1e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.cases, c.max_error, c.limit);
    }
    out.emit(&text, &r);
    if r.pass {
        Ok(())
    } else {
        Err(CliError::ExperimentFail)
    }
}
