//! SVG picture of a developed trace over the unfolded charts it visits.

use std::fmt::Write;

use crate::geom::Vec2;
use crate::surface::ConeSurface;
use crate::tracer::{develop, develop_frames, TraceResult};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Render the unfolding of `trace`. Output is deterministic for a given trace.
pub fn developed_svg(surface: &ConeSurface, trace: &TraceResult) -> String {
    let frames = develop_frames(surface, trace);
    let mut outlines: Vec<Vec<Vec2>> = Vec::new();
    for (k, (seg, f)) in trace.segments.iter().zip(&frames).enumerate() {
        // a segment entered without crossing anything stays in the same chart copy
        if k > 0 && seg.entry.is_empty() {
            continue;
        }
        outlines.push(surface.charts[seg.chart].vertices.iter().map(|&v| f.apply(v)).collect());
    }
    let path = develop(surface, trace);

    let all = outlines.iter().flatten().chain(path.iter());
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in all {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: Vec2| (MARGIN + (p.x - lo.x) * scale, SIZE - MARGIN - (p.y - lo.y) * scale);
    let pts = |ps: &[Vec2]| {
        let mut s = String::new();
        for (i, &p) in ps.iter().enumerate() {
            let (x, y) = map(p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.3},{y:.3}");
        }
        s
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(out, "<!-- conesurf {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for o in &outlines {
        let _ = writeln!(out, r##"<polygon points="{}" fill="#eef2f7" stroke="#7a8699" stroke-width="0.7"/>"##, pts(o));
    }
    let _ = writeln!(out, r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##, pts(&path));
    if let Some(&p) = path.first() {
        let (x, y) = map(p);
        let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#c0392b"/>"##);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::tracer::{trace, GeodesicState, TraceOptions};

    #[test]
    fn draws_every_chart_copy() {
        let s = corpus::flat_torus();
        let r = trace(&s, GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(1.0, 0.0)), TraceOptions::new(3.0)).unwrap();
        let svg = developed_svg(&s, &r);
        assert_eq!(svg.matches("<polygon").count(), 4);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, developed_svg(&s, &r));
    }
}
