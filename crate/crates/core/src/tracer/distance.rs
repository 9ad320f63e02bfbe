use serde::Serialize;
use thiserror::Error;

use crate::geom::{is_convex, point_segment_distance, Isometry, Vec2};
use crate::surface::ConeSurface;

use super::{trace, GeodesicState, TraceOptions, TraceResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("path {which} does not cover arclength {at} of the comparison window")]
    IncomparableTraces { which: usize, at: f64 },
    #[error("window and step must be positive")]
    BadWindow,
}

/// Something that can be evaluated at an arclength on the surface.
pub trait SurfacePath {
    /// Chart and chart coordinates at arclength `s`, or `None` when `s` is
    /// outside the parametrized range.
    fn position(&self, s: f64) -> Option<(usize, Vec2)>;
}

impl SurfacePath for TraceResult {
    fn position(&self, s: f64) -> Option<(usize, Vec2)> {
        self.locate(s).map(|(c, p, _)| (c, p))
    }
}

#[derive(Debug, Clone)]
struct ChartCopy {
    chart: usize,
    /// Maps the copy into root coordinates.
    frame: Isometry,
    /// Developed edges crossed on the way from the root, in order.
    gates: Vec<(Vec2, Vec2)>,
}

/// Chart copies within two edge crossings of every chart, for repeated
/// point-to-point distances on one surface.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    copies: Vec<Vec<ChartCopy>>,
    convex: Vec<bool>,
}

impl DistanceTable {
    pub fn new(surface: &ConeSurface) -> Self {
        let copies = (0..surface.charts.len()).map(|root| copies_around(surface, root, 2)).collect();
        let convex = surface.charts.iter().map(|c| is_convex(&c.vertices)).collect();
        DistanceTable { copies, convex }
    }

    /// Length of the shortest straight path from `a` to `b` that stays within
    /// two rings of chart copies around `a` and misses every cone point,
    /// capped at `cap`.
    pub fn distance(&self, surface: &ConeSurface, a: (usize, Vec2), b: (usize, Vec2), cap: f64) -> f64 {
        let ch = &surface.charts[a.0];
        // inside one convex chart the straight segment wins whenever it is
        // shorter than any path leaving the chart and coming back
        if a.0 == b.0 && self.convex[a.0] {
            let direct = a.1.dist(b.1);
            let to_edge = |p: Vec2| (0..ch.len()).map(|i| point_segment_distance(p, ch.vertex(i), ch.vertex(i + 1)).0).fold(f64::INFINITY, f64::min);
            if direct <= to_edge(a.1) + to_edge(b.1) {
                return direct.min(cap);
            }
        }
        let mut cands: Vec<(f64, &ChartCopy)> = self.copies[a.0]
            .iter()
            .filter(|c| c.chart == b.0)
            .map(|c| (c.frame.apply(b.1).dist(a.1), c))
            .collect();
        cands.sort_by(|x, y| x.0.total_cmp(&y.0));
        let all_convex = self.convex.iter().all(|&c| c);
        for (len, c) in cands {
            if len >= cap {
                break;
            }
            if len <= surface.tol.len {
                return len;
            }
            let end = c.frame.apply(b.1);
            let ok = if all_convex {
                c.gates.iter().all(|&(g0, g1)| crosses(a.1, end, g0, g1, surface.tol.hit))
            } else {
                traced(surface, a, end - a.1, len, b)
            };
            if ok {
                return len;
            }
        }
        cap
    }
}

/// Does segment `p q` pass through the interior of segment `g0 g1`?
fn crosses(p: Vec2, q: Vec2, g0: Vec2, g1: Vec2, tol: f64) -> bool {
    let d = q - p;
    let e = g1 - g0;
    let den = d.cross(e);
    if den.abs() <= f64::EPSILON * d.norm() * e.norm() {
        return false;
    }
    let s = (g0 - p).cross(e) / den;
    let u = (g0 - p).cross(d) / den;
    let slack = tol / e.norm();
    (-1e-12..=1.0 + 1e-12).contains(&s) && u > slack && u < 1.0 - slack
}

fn traced(surface: &ConeSurface, a: (usize, Vec2), w: Vec2, len: f64, b: (usize, Vec2)) -> bool {
    let Ok(r) = trace(surface, GeodesicState::new(a.0, a.1, w), TraceOptions::new(len).sample_step(None)) else {
        return false;
    };
    let end = r.end_state();
    r.cone_hit().is_none() && same_point(surface, (end.chart, end.point), b, surface.tol.rec)
}

fn copies_around(surface: &ConeSurface, root: usize, rings: usize) -> Vec<ChartCopy> {
    let mut out = vec![ChartCopy { chart: root, frame: Isometry::IDENTITY, gates: Vec::new() }];
    let mut frontier = 0;
    for _ in 0..rings {
        let end = out.len();
        for k in frontier..end {
            let c = out[k].clone();
            let poly = &surface.charts[c.chart];
            for e in 0..poly.len() {
                let (other, iso) = surface.across(c.chart, e);
                let (g0, g1) = poly.edge(e);
                let mut gates = c.gates.clone();
                gates.push((c.frame.apply(g0), c.frame.apply(g1)));
                out.push(ChartCopy { chart: other.chart, frame: iso.inverse().then(&c.frame), gates });
            }
        }
        frontier = end;
    }
    out
}

fn same_point(surface: &ConeSurface, a: (usize, Vec2), b: (usize, Vec2), tol: f64) -> bool {
    if a.0 == b.0 && a.1.dist(b.1) <= tol {
        return true;
    }
    (0..surface.charts[a.0].len()).any(|e| {
        let (other, iso) = surface.across(a.0, e);
        other.chart == b.0 && iso.apply(a.1).dist(b.1) <= tol
    })
}

/// One-off [`DistanceTable::distance`].
pub fn surface_distance(surface: &ConeSurface, a: (usize, Vec2), b: (usize, Vec2), cap: f64) -> f64 {
    DistanceTable::new(surface).distance(surface, a, b, cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceReport {
    pub value: f64,
    pub window: f64,
    /// Upper bound on the contribution of `|t| > window`: `2 D e^{-W}`.
    pub truncation_bound: f64,
    pub diameter_bound: f64,
}

/// Weighted distance `int_{-W}^{W} d(g1(a1+t), g2(a2+t)) e^{-|t|} dt`
/// between two parametrized paths, by composite Simpson quadrature.
pub fn geodesic_distance(
    surface: &ConeSurface,
    g1: &dyn SurfacePath,
    anchor1: f64,
    g2: &dyn SurfacePath,
    anchor2: f64,
    window: f64,
    step: f64,
) -> Result<DistanceReport, DistanceError> {
    if !(window > 0.0 && step > 0.0) {
        return Err(DistanceError::BadWindow);
    }
    let diameter: f64 = surface.charts.iter().map(|c| c.diameter()).sum();
    let table = DistanceTable::new(surface);
    let f = |t: f64| -> Result<f64, DistanceError> {
        let p = g1.position(anchor1 + t).ok_or(DistanceError::IncomparableTraces { which: 1, at: anchor1 + t })?;
        let q = g2.position(anchor2 + t).ok_or(DistanceError::IncomparableTraces { which: 2, at: anchor2 + t })?;
        Ok(table.distance(surface, p, q, diameter) * (-t.abs()).exp())
    };
    let mut n = (window / step).ceil() as usize;
    if n % 2 == 1 {
        n += 1;
    }
    let h = window / n as f64;
    let mut total = 0.0;
    for sign in [-1.0, 1.0] {
        let mut acc = f(0.0)? + f(sign * window)?;
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(sign * h * i as f64)?;
        }
        total += acc * h / 3.0;
    }
    Ok(DistanceReport { value: total, window, truncation_bound: 2.0 * diameter * (-window).exp(), diameter_bound: diameter })
}
