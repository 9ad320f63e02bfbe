//! Trace a geodesic on the regular octagon surface, check that it develops
//! to a straight segment, and write the unfolding as SVG.
use conesurf::svg::developed_svg;
use conesurf::tracer::{collinearity_residual, develop, polyline_length};
use conesurf::{corpus, trace, GeodesicState, TraceOptions, Vec2};

fn main() {
    let s = corpus::octagon();
    let start = GeodesicState::new(0, Vec2::new(0.05, -0.1), Vec2::new(1.0, 5f64.sqrt() - 1.0));
    let r = trace(&s, start, TraceOptions::new(20.0)).expect("start is inside the octagon");
    let dev = develop(&s, &r);
    println!("segments {}  length {}", r.segments.len(), r.total_length);
    println!("developed length {}  collinearity residual {:.2e}", polyline_length(&dev), collinearity_residual(&dev));
    for t in [5.0, 10.0, 20.0] {
        println!("m({t}) = {:.6}", r.min_distance_at(t));
    }
    let out = std::env::temp_dir().join("octagon_trace.svg");
    std::fs::write(&out, developed_svg(&s, &r)).expect("temp dir is writable");
    println!("wrote {}", out.display());
}
