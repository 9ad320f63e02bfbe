//! Saddle connections: geodesic segments joining singular points.
//!
//! Enumeration unfolds charts around each corner of the base vertex class.
//! Every unfolded copy is reached through a "window", the open angular
//! interval of rays from the base point that pass through the chain of
//! edges crossed so far. Vertices of a copy that lie strictly inside its
//! window are visible endpoints; each further edge narrows the window for the
//! next copy. Copies farther than the length bound are pruned. Every
//! candidate is then confirmed by tracing from the base point.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use serde::Serialize;
use thiserror::Error;

use crate::geom::{point_segment_distance, wrap, Isometry, Vec2};
use crate::surface::{is_geodesic_passage, side_angles, ConeSurface, SingularityKind};
use crate::tracer::{
    develop, trace, walk_corners, GeodesicState, SurfacePath, TraceError, TraceEvent, TraceOptions,
    TraceResult,
};

pub const DEFAULT_UNFOLDING_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaddleError {
    #[error("unfolding visited more than {0} chart copies")]
    UnfoldingBudgetExceeded(usize),
    #[error("vertex class {0} is not a singular point")]
    NotSingular(usize),
    #[error("unknown vertex class {0}")]
    UnknownVertexClass(usize),
    #[error("chart '{0}' is not convex; enumeration needs convex charts")]
    NonConvexChart(String),
    #[error("link {index} starts at class {found}, expected {expected}")]
    EndpointMismatch { index: usize, expected: usize, found: usize },
    #[error("empty chain")]
    EmptyChain,
    #[error("junction at class {class} is not a geodesic passage (side angles {left}, {right})")]
    NotGeodesicJunction { class: usize, left: f64, right: f64 },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleConnection {
    pub start: usize,
    pub end: usize,
    pub length: f64,
    /// Developed displacement, in the coordinates of `start_chart`.
    pub holonomy: Vec2,
    pub start_chart: usize,
    pub start_vertex: usize,
    /// Cone coordinate of the outgoing direction at `start`.
    pub start_angle: f64,
    /// Cone coordinate of the backward ray at `end`.
    pub end_angle: f64,
    /// Large classes passed through (empty for primitive connections).
    pub interior_hits: Vec<usize>,
    pub path: TraceResult,
}

impl SaddleConnection {
    pub fn direction_angle(&self) -> f64 {
        self.holonomy.angle()
    }
}

impl SurfacePath for SaddleConnection {
    fn position(&self, s: f64) -> Option<(usize, Vec2)> {
        self.path.position(s)
    }
}

struct Window {
    chart: usize,
    frame: Isometry,
    entry: Option<usize>,
    right: Vec2,
    left: Vec2,
}

fn strictly_inside(right: Vec2, left: Vec2, w: Vec2) -> bool {
    let eps = 1e-12 * w.norm();
    right.cross(w) > eps && w.cross(left) > eps
}

/// All primitive saddle connections of length at most `max_len` starting at
/// `base` (or at every singular class when `base` is `None`).
pub fn enumerate_saddles(
    surface: &ConeSurface,
    base: Option<usize>,
    max_len: f64,
    budget: usize,
) -> Result<Vec<SaddleConnection>, SaddleError> {
    for ch in &surface.charts {
        if !crate::geom::is_convex(&ch.vertices) {
            return Err(SaddleError::NonConvexChart(ch.id.clone()));
        }
    }
    let bases: Vec<usize> = match base {
        Some(b) => {
            let cls = surface.class(b).map_err(|_| SaddleError::UnknownVertexClass(b))?;
            if !cls.singular {
                return Err(SaddleError::NotSingular(b));
            }
            vec![b]
        }
        None => surface.singular_classes().map(|c| c.id).collect(),
    };
    let mut out = Vec::new();
    let mut visited = 0usize;
    for b in bases {
        for corner in surface.vertex_classes[b].corners.clone() {
            enumerate_from_corner(surface, corner.chart, corner.vertex, max_len, budget, &mut visited, &mut out)?;
        }
    }
    let mut seen = HashSet::new();
    out.retain(|s: &SaddleConnection| {
        let key = (s.start, s.end, (s.start_angle * 1e9).round() as i64, (s.length * 1e9).round() as i64);
        seen.insert(key)
    });
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.direction_angle().total_cmp(&b.direction_angle()))
            .then(a.start.cmp(&b.start))
            .then(a.start_angle.total_cmp(&b.start_angle))
    });
    Ok(out)
}

fn enumerate_from_corner(
    surface: &ConeSurface,
    chart: usize,
    vertex: usize,
    max_len: f64,
    budget: usize,
    visited: &mut usize,
    out: &mut Vec<SaddleConnection>,
) -> Result<(), SaddleError> {
    let ch = &surface.charts[chart];
    let n = ch.len();
    let base = ch.vertex(vertex);
    let mut candidates: Vec<Vec2> = Vec::new();

    // the outgoing edge itself
    let along_edge = ch.vertex(vertex + 1) - base;
    if along_edge.norm() <= max_len + surface.tol.len {
        candidates.push(along_edge);
    }
    let right = along_edge.normalized().unwrap();
    let left = (ch.vertex(vertex + n - 1) - base).normalized().unwrap();

    let mut stack = vec![Window { chart, frame: Isometry::IDENTITY, entry: None, right, left }];
    while let Some(win) = stack.pop() {
        *visited += 1;
        if *visited > budget {
            return Err(SaddleError::UnfoldingBudgetExceeded(budget));
        }
        let poly = &surface.charts[win.chart];
        let m = poly.len();
        let root = win.entry.is_none();
        for k in 0..m {
            if root && (k == vertex || k == (vertex + 1) % n || k == (vertex + n - 1) % n) {
                continue;
            }
            if let Some(e) = win.entry {
                if k == e || k == (e + 1) % m {
                    continue;
                }
            }
            let w = win.frame.apply(poly.vertex(k)) - base;
            if w.norm() <= max_len + surface.tol.len && strictly_inside(win.right, win.left, w) {
                candidates.push(w);
            }
        }
        for i in 0..m {
            if Some(i) == win.entry || (root && (i == vertex || i == (vertex + n - 1) % n)) {
                continue;
            }
            let (a, b) = poly.edge(i);
            let (a, b) = (win.frame.apply(a), win.frame.apply(b));
            if (b - a).cross(base - a) <= 0.0 {
                continue;
            }
            if point_segment_distance(base, a, b).0 > max_len + surface.tol.len {
                continue;
            }
            let (da, db) = (a - base, b - base);
            let new_right = if win.right.cross(da) > 0.0 { da } else { win.right };
            let new_left = if db.cross(win.left) > 0.0 { db } else { win.left };
            if new_right.cross(new_left) <= 1e-15 * new_right.norm() * new_left.norm() {
                continue;
            }
            let (partner, iso) = surface.across(win.chart, i);
            stack.push(Window {
                chart: partner.chart,
                frame: iso.inverse().then(&win.frame),
                entry: Some(partner.edge),
                right: new_right.normalized().unwrap(),
                left: new_left.normalized().unwrap(),
            });
        }
    }

    // keep the nearest candidate along each ray
    candidates.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut kept: Vec<Vec2> = Vec::new();
    for c in candidates {
        let dir = c.normalized().unwrap();
        if kept.iter().any(|k| k.normalized().unwrap().dist(dir) < 1e-12) {
            continue;
        }
        kept.push(c);
    }

    let start = surface.class_of(chart, vertex);
    for w in kept {
        let len = w.norm();
        let dir = w * (1.0 / len);
        let opts = TraceOptions::new(max_len.max(len) + 10.0 * surface.tol.len + 1e-9).sample_step(None);
        let path = trace(surface, GeodesicState::new(chart, base, dir), opts)?;
        let Some(TraceEvent::ConeHit { arclength, class, sector, .. }) = path.events.last().cloned() else {
            continue;
        };
        let exact = (arclength - len).abs() <= 1e-7 * len.max(1.0);
        // a ray through an ordinary vertex keeps going to the next singular point
        let through_regular = path.events.iter().any(|e| e.name() == "VertexPass") && arclength <= max_len + surface.tol.len;
        if !exact && !through_regular {
            continue;
        }
        let (len, w) = if exact { (len, w) } else { (arclength, dir * arclength) };
        out.push(SaddleConnection {
            start,
            end: class,
            length: len,
            holonomy: w,
            start_chart: chart,
            start_vertex: vertex,
            start_angle: surface.cone_coordinate(chart, vertex, dir),
            end_angle: sector.incoming,
            interior_hits: Vec::new(),
            path,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSpectrum {
    /// Distinct holonomy directions in `(-pi, pi]` with multiplicities.
    pub directions: Vec<(f64, usize)>,
    pub max_gap: f64,
}

/// Holonomy directions of all saddle connections of length at most `max_len`.
pub fn direction_spectrum(surface: &ConeSurface, max_len: f64, budget: usize) -> Result<DirectionSpectrum, SaddleError> {
    let saddles = enumerate_saddles(surface, None, max_len, budget)?;
    Ok(spectrum_of(&saddles))
}

pub fn spectrum_of(saddles: &[SaddleConnection]) -> DirectionSpectrum {
    let mut angles: Vec<f64> = saddles
        .iter()
        .map(|s| {
            let a = s.direction_angle();
            if a <= -PI + 1e-12 {
                PI
            } else {
                a
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    let mut directions: Vec<(f64, usize)> = Vec::new();
    for a in angles {
        match directions.last_mut() {
            Some((b, m)) if (a - *b).abs() < 1e-9 => *m += 1,
            _ => directions.push((a, 1)),
        }
    }
    let max_gap = match directions.len() {
        0 => TAU,
        1 => TAU,
        k => {
            let mut g = directions[0].0 + TAU - directions[k - 1].0;
            for w in directions.windows(2) {
                g = g.max(w[1].0 - w[0].0);
            }
            g
        }
    };
    DirectionSpectrum { directions, max_gap }
}

/// Turning data where one link of a chain meets the next.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Junction {
    pub class: usize,
    pub incoming: f64,
    pub outgoing: f64,
    pub left_angle: f64,
    pub right_angle: f64,
    /// Both side angles are at least pi.
    pub geodesic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseGeodesic {
    pub links: Vec<SaddleConnection>,
    pub closed: bool,
    /// One entry per interior junction, plus the closing junction when closed.
    pub junctions: Vec<Junction>,
    pub length: f64,
}

impl PiecewiseGeodesic {
    /// Single closed generalized saddle connection used as a chain.
    pub fn is_single_loop(&self) -> bool {
        self.closed && self.links.len() == 1
    }

    /// Junctions at small-angle cone points, where the chain may bend.
    pub fn small_junctions<'a>(&'a self, surface: &'a ConeSurface) -> impl Iterator<Item = &'a Junction> + 'a {
        self.junctions.iter().filter(move |j| surface.vertex_classes[j.class].kind == SingularityKind::Small)
    }
}

impl SurfacePath for PiecewiseGeodesic {
    fn position(&self, s: f64) -> Option<(usize, Vec2)> {
        let s = if self.closed {
            wrap(s, self.length)
        } else if s < -1e-12 || s > self.length + 1e-12 {
            return None;
        } else {
            s.clamp(0.0, self.length)
        };
        let mut acc = 0.0;
        for (i, l) in self.links.iter().enumerate() {
            if s <= acc + l.length || i + 1 == self.links.len() {
                return l.path.position((s - acc).min(l.path.total_length));
            }
            acc += l.length;
        }
        None
    }
}

fn junction(surface: &ConeSurface, a: &SaddleConnection, b: &SaddleConnection) -> Junction {
    let theta = surface.vertex_classes[a.end].angle;
    let (l, r) = side_angles(theta, a.end_angle, b.start_angle);
    Junction {
        class: a.end,
        incoming: a.end_angle,
        outgoing: b.start_angle,
        left_angle: l,
        right_angle: r,
        geodesic: is_geodesic_passage(theta, a.end_angle, b.start_angle, surface.tol.angle),
    }
}

/// Join saddle connections end to start.
pub fn chain(surface: &ConeSurface, links: Vec<SaddleConnection>) -> Result<PiecewiseGeodesic, SaddleError> {
    if links.is_empty() {
        return Err(SaddleError::EmptyChain);
    }
    for (i, w) in links.windows(2).enumerate() {
        if w[0].end != w[1].start {
            return Err(SaddleError::EndpointMismatch { index: i + 1, expected: w[0].end, found: w[1].start });
        }
    }
    let closed = links.last().unwrap().end == links[0].start;
    let mut junctions: Vec<Junction> = links.windows(2).map(|w| junction(surface, &w[0], &w[1])).collect();
    if closed {
        junctions.push(junction(surface, links.last().unwrap(), &links[0]));
    }
    let length = links.iter().map(|l| l.length).sum();
    Ok(PiecewiseGeodesic { links, closed, junctions, length })
}

/// Concatenate two connections through a large cone point where the
/// passage is geodesic, producing a generalized saddle connection.
pub fn join_through(
    surface: &ConeSurface,
    a: &SaddleConnection,
    b: &SaddleConnection,
) -> Result<SaddleConnection, SaddleError> {
    if a.end != b.start {
        return Err(SaddleError::EndpointMismatch { index: 1, expected: a.end, found: b.start });
    }
    let j = junction(surface, a, b);
    if !j.geodesic || surface.vertex_classes[a.end].kind != SingularityKind::Large {
        return Err(SaddleError::NotGeodesicJunction { class: a.end, left: j.left_angle, right: j.right_angle });
    }
    let arrive = a.path.segments.last().unwrap();
    let arrive_vertex = surface.charts[arrive.chart]
        .vertices
        .iter()
        .position(|v| v.dist(arrive.end) <= surface.tol.hit)
        .expect("connection ends at a vertex");
    let from_slot = surface.corner_slot(arrive.chart, arrive_vertex).1;
    let to_slot = surface.corner_slot(b.start_chart, b.start_vertex).1;
    let mut path = a.path.clone();
    path.events.pop();
    let offset = a.path.total_length;
    for (i, seg) in b.path.segments.iter().enumerate() {
        let mut seg = seg.clone();
        seg.start_arclength += offset;
        if i == 0 {
            seg.entry = walk_corners(surface, a.end, from_slot, to_slot);
        }
        path.segments.push(seg);
    }
    for e in &b.path.events {
        let mut e = e.clone();
        match &mut e {
            TraceEvent::EdgeCross { arclength, .. }
            | TraceEvent::VertexPass { arclength, .. }
            | TraceEvent::ConeHit { arclength, .. }
            | TraceEvent::MaxLengthReached { arclength }
            | TraceEvent::SelfRecurrence { arclength, .. } => *arclength += offset,
        }
        path.events.push(e);
    }
    path.total_length = offset + b.path.total_length;
    path.min_distance_series.extend(b.path.min_distance_series.iter().map(|&(t, _)| (t + offset, 0.0)));
    let dev = develop(surface, &path);
    let mut interior_hits = a.interior_hits.clone();
    interior_hits.push(a.end);
    interior_hits.extend(&b.interior_hits);
    Ok(SaddleConnection {
        start: a.start,
        end: b.end,
        length: a.length + b.length,
        holonomy: *dev.last().unwrap() - dev[0],
        start_chart: a.start_chart,
        start_vertex: a.start_vertex,
        start_angle: a.start_angle,
        end_angle: b.end_angle,
        interior_hits,
        path,
    })
}

/// Closed chains of up to `max_links` connections with total length at most `max_len`.
pub fn closed_chains(
    surface: &ConeSurface,
    saddles: &[SaddleConnection],
    max_links: usize,
    max_len: f64,
) -> Result<Vec<PiecewiseGeodesic>, SaddleError> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..saddles.len()).map(|i| vec![i]).collect();
    while let Some(idx) = stack.pop() {
        let first = &saddles[idx[0]];
        let last = &saddles[*idx.last().unwrap()];
        let len: f64 = idx.iter().map(|&i| saddles[i].length).sum();
        if last.end == first.start {
            out.push(chain(surface, idx.iter().map(|&i| saddles[i].clone()).collect())?);
        }
        if idx.len() < max_links {
            for (j, s) in saddles.iter().enumerate() {
                if s.start == last.end && len + s.length <= max_len && j >= idx[0] {
                    let mut next = idx.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
        }
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length).then(a.links.len().cmp(&b.links.len())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use std::f64::consts::SQRT_2;

    #[test]
    fn torus_short_list() {
        let s = corpus::marked_torus();
        let list = enumerate_saddles(&s, Some(0), 1.5, DEFAULT_UNFOLDING_BUDGET).unwrap();
        assert_eq!(list.len(), 8);
        assert_eq!(list.iter().filter(|c| (c.length - 1.0).abs() < 1e-12).count(), 4);
        assert_eq!(list.iter().filter(|c| (c.length - SQRT_2).abs() < 1e-12).count(), 4);
        assert!(enumerate_saddles(&s, Some(0), 0.5, DEFAULT_UNFOLDING_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let s = corpus::marked_torus();
        assert_eq!(
            enumerate_saddles(&s, Some(0), 30.0, 50).unwrap_err(),
            SaddleError::UnfoldingBudgetExceeded(50)
        );
    }

    #[test]
    fn base_must_be_singular() {
        let s = corpus::flat_torus();
        assert_eq!(enumerate_saddles(&s, Some(0), 2.0, 100).unwrap_err(), SaddleError::NotSingular(0));
    }

    #[test]
    fn spectrum_of_short_torus_list() {
        let s = corpus::marked_torus();
        let sp = direction_spectrum(&s, 1.5, DEFAULT_UNFOLDING_BUDGET).unwrap();
        assert_eq!(sp.directions.len(), 8);
        assert!((sp.max_gap - PI / 4.0).abs() < 1e-12);
        let empty = direction_spectrum(&s, 0.9, DEFAULT_UNFOLDING_BUDGET).unwrap();
        assert!(empty.directions.is_empty() && empty.max_gap == TAU);
    }

    #[test]
    fn chains() {
        let t = corpus::marked_torus();
        let list = enumerate_saddles(&t, Some(0), 1.0, DEFAULT_UNFOLDING_BUDGET).unwrap();
        let east = list.iter().find(|c| c.holonomy.dist(Vec2::new(1.0, 0.0)) < 1e-12).unwrap().clone();
        let c = chain(&t, vec![east.clone(), east]).unwrap();
        assert!(c.closed && (c.length - 2.0).abs() < 1e-12);
        assert!(c.junctions.iter().all(|j| j.geodesic));

        let p = corpus::pillowcase();
        let all = enumerate_saddles(&p, None, 1.1, DEFAULT_UNFOLDING_BUDGET).unwrap();
        let a = all[0].clone();
        let b = all.iter().find(|s| s.start == a.end && s.end != a.start).unwrap().clone();
        let open = chain(&p, vec![a.clone(), b.clone()]).unwrap();
        assert!(!open.closed && (open.length - 2.0).abs() < 1e-12);
        assert_eq!(open.small_junctions(&p).count(), 1);
        let bad = all.iter().find(|s| s.start != a.end).unwrap().clone();
        assert!(matches!(chain(&p, vec![a, bad]), Err(SaddleError::EndpointMismatch { index: 1, .. })));
    }

    #[test]
    fn generalized_through_octagon_point() {
        let s = corpus::octagon();
        let list = enumerate_saddles(&s, Some(0), 2.0, DEFAULT_UNFOLDING_BUDGET).unwrap();
        let a = &list[0];
        let b = list
            .iter()
            .find(|b| is_geodesic_passage(6.0 * PI, a.end_angle, b.start_angle, 1e-9))
            .expect("some continuation is geodesic");
        let g = join_through(&s, a, b).unwrap();
        assert_eq!(g.interior_hits, vec![0]);
        assert!((g.length - a.length - b.length).abs() < 1e-12);
        assert!((g.path.total_length - g.length).abs() < 1e-9);
        let not = list.iter().find(|b| !is_geodesic_passage(6.0 * PI, a.end_angle, b.start_angle, 1e-9)).unwrap();
        assert!(matches!(join_through(&s, a, not), Err(SaddleError::NotGeodesicJunction { .. })));
    }
}
