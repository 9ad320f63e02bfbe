use crate::geom::{Isometry, Vec2};
use crate::surface::ConeSurface;

use super::TraceResult;

/// Unfold a trace into the plane of its first chart by composing the
/// gluing isometries recorded on each segment.
///
/// For a geodesic that does not bend at a cone point the result is a
/// straight polyline of total length `trace.total_length`.
pub fn develop(surface: &ConeSurface, trace: &TraceResult) -> Vec<Vec2> {
    let frames = develop_frames(surface, trace);
    let mut out = Vec::with_capacity(trace.segments.len() + 1);
    for (i, (seg, frame)) in trace.segments.iter().zip(&frames).enumerate() {
        if i == 0 {
            out.push(frame.apply(seg.start));
        }
        out.push(frame.apply(seg.end));
    }
    out
}

/// Map from each segment's chart into the developed plane.
pub fn develop_frames(surface: &ConeSurface, trace: &TraceResult) -> Vec<Isometry> {
    let mut frame = Isometry::IDENTITY;
    trace
        .segments
        .iter()
        .map(|seg| {
            for c in &seg.entry {
                // chart-to-chart map of the crossing, pulled back into the developed frame
                let (_, iso) = surface.apply_crossing(*c);
                frame = iso.inverse().then(&frame);
            }
            frame
        })
        .collect()
}

pub fn polyline_length(pts: &[Vec2]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Largest perpendicular distance of the polyline's vertices from the line
/// through its endpoints.
pub fn collinearity_residual(pts: &[Vec2]) -> f64 {
    let (Some(&a), Some(&b)) = (pts.first(), pts.last()) else {
        return 0.0;
    };
    let Some(d) = (b - a).normalized() else {
        return pts.iter().map(|p| p.dist(a)).fold(0.0, f64::max);
    };
    pts.iter().map(|p| d.cross(*p - a).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::tracer::{trace, GeodesicState, TraceOptions};

    #[test]
    fn single_chart_trace_is_itself() {
        let s = corpus::octagon();
        let st = GeodesicState::new(0, Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0));
        let r = trace(&s, st, TraceOptions::new(0.5)).unwrap();
        assert_eq!(develop(&s, &r), vec![Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.0)]);
    }

    #[test]
    fn torus_horizontal_develops_to_segment() {
        let s = corpus::flat_torus();
        let st = GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(1.0, 0.0));
        let r = trace(&s, st, TraceOptions::new(3.0)).unwrap();
        let d = develop(&s, &r);
        assert!(d[0].dist(Vec2::new(0.5, 0.5)) < 1e-12);
        assert!(d.last().unwrap().dist(Vec2::new(3.5, 0.5)) < 1e-12);
        assert!(collinearity_residual(&d) < 1e-12);
    }

    #[test]
    fn torus_vertex_pass_develops_straight() {
        let s = corpus::flat_torus();
        let st = GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(1.0, 1.0));
        let r = trace(&s, st, TraceOptions::new(4.0)).unwrap();
        let d = develop(&s, &r);
        let end = Vec2::new(0.5, 0.5) + Vec2::new(1.0, 1.0) * (4.0 / 2f64.sqrt());
        assert!(d.last().unwrap().dist(end) < 1e-9);
    }
}
