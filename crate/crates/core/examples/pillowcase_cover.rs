//! Branched triple cover of the pillowcase: every cone point becomes 3pi.
use conesurf::covering::{build_cover, default_odd_degree, lift_trace, riemann_hurwitz_check, search_monodromy, BranchMode, DEFAULT_SEARCH_BUDGET};
use conesurf::{corpus, trace, GeodesicState, TraceOptions, Vec2};
use std::f64::consts::PI;

fn main() {
    let p = corpus::pillowcase();
    let d = default_odd_degree(&p).unwrap();
    let spec = search_monodromy(&p, d, BranchMode::Strict, DEFAULT_SEARCH_BUDGET).unwrap();
    println!("degree {d}, monodromy {}", spec.to_json().replace('\n', " "));
    let cover = build_cover(&p, &spec).unwrap();
    println!("cover chi {}  riemann-hurwitz residual {}", cover.report.euler_characteristic, riemann_hurwitz_check(&cover.report));
    for c in &cover.surface.vertex_classes {
        println!("  cover class {} angle {:.3} pi", c.id, c.angle / PI);
    }
    let r = trace(&p, GeodesicState::new(0, Vec2::new(0.3, 0.2), Vec2::new(1.0, 0.4)), TraceOptions::new(3.0)).unwrap();
    let lifted = lift_trace(&p, &cover, &r, 0).unwrap();
    let charts: Vec<&str> = lifted.segments.iter().map(|g| cover.surface.charts[g.chart].id.as_str()).collect();
    println!("lifted trace visits {charts:?}");
}
