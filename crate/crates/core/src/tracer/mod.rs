//! Straight-line flow on a cone surface.
//!
//! A geodesic is followed chart by chart: inside a polygon it is a straight
//! segment, and on reaching an edge it continues in the glued polygon after
//! applying the gluing isometry. A ray that passes within `tol.hit` of a
//! polygon corner has reached the corresponding vertex class. Ordinary
//! (unmarked 2pi) vertices are passed straight through; singular ones stop
//! the trace by default and report the sector of admissible continuations.

mod develop;
mod distance;
mod experiment;
mod sector;

pub use develop::{collinearity_residual, develop, develop_frames, polyline_length};
pub use distance::{geodesic_distance, surface_distance, DistanceError, DistanceTable, DistanceReport, SurfacePath};
pub use experiment::{
    min_distance_experiment, predict_self_intersection, self_intersections, PredictionError, MinDistanceReport,
    SelfIntersection, SelfIntersectionPrediction,
};
pub use sector::{continuation_sector, continuation_sector_for_arrival, sector_width, ContinuationSector};

use serde::Serialize;
use thiserror::Error;

use crate::geom::{contains_point, point_segment_distance, wrap, Vec2};
use crate::surface::{ConeSurface, Crossing, SingularityKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("start point is outside chart {0}")]
    StartOutsideSurface(usize),
    #[error("unknown chart {0}")]
    UnknownChart(usize),
    #[error("direction has zero or non-finite length")]
    ZeroDirection,
    #[error("max_length must be positive")]
    NonPositiveLength,
    #[error("direction leaves the surface at the start corner")]
    DirectionOutsideCorner,
    #[error("trace made no progress after {0} steps")]
    Stalled(usize),
}

/// A point with a unit direction in a chart, at a given arclength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicState {
    pub chart: usize,
    pub point: Vec2,
    pub direction: Vec2,
    pub arclength: f64,
}

impl GeodesicState {
    pub fn new(chart: usize, point: Vec2, direction: Vec2) -> Self {
        GeodesicState { chart, point, direction, arclength: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub max_length: f64,
    pub stop_on_cone: bool,
    pub detect_recurrence: bool,
    /// Uniform sampling step for the distance-to-singularity series.
    pub sample_step: Option<f64>,
    pub max_steps: usize,
}

impl TraceOptions {
    pub fn new(max_length: f64) -> Self {
        TraceOptions { max_length, stop_on_cone: true, detect_recurrence: false, sample_step: Some(0.01), max_steps: 10_000_000 }
    }

    pub fn detect_recurrence(mut self, on: bool) -> Self {
        self.detect_recurrence = on;
        self
    }

    pub fn stop_on_cone(mut self, on: bool) -> Self {
        self.stop_on_cone = on;
        self
    }

    pub fn sample_step(mut self, step: Option<f64>) -> Self {
        self.sample_step = step;
        self
    }
}

/// How a trace got from one corner of a vertex class to another.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Passage {
    /// Cone coordinate of the outgoing direction.
    pub outgoing: f64,
    /// Gluings crossed while walking around the vertex.
    pub crossings: Vec<Crossing>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum TraceEvent {
    EdgeCross { arclength: f64, crossing: Crossing, from_chart: usize, to_chart: usize },
    /// Straight passage through an ordinary (unmarked, angle 2pi) vertex.
    VertexPass { arclength: f64, class: usize, passage: Passage },
    ConeHit {
        arclength: f64,
        class: usize,
        chart: usize,
        vertex: usize,
        sector: ContinuationSector,
        continued: Option<Passage>,
    },
    MaxLengthReached { arclength: f64 },
    SelfRecurrence { arclength: f64, residual: f64 },
}

impl TraceEvent {
    pub fn arclength(&self) -> f64 {
        match self {
            TraceEvent::EdgeCross { arclength, .. }
            | TraceEvent::VertexPass { arclength, .. }
            | TraceEvent::ConeHit { arclength, .. }
            | TraceEvent::MaxLengthReached { arclength }
            | TraceEvent::SelfRecurrence { arclength, .. } => *arclength,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TraceEvent::EdgeCross { .. } => "EdgeCross",
            TraceEvent::VertexPass { .. } => "VertexPass",
            TraceEvent::ConeHit { .. } => "ConeHit",
            TraceEvent::MaxLengthReached { .. } => "MaxLengthReached",
            TraceEvent::SelfRecurrence { .. } => "SelfRecurrence",
        }
    }
}

/// Straight piece of a trace inside one chart. `entry` lists the gluings
/// crossed between the previous segment's chart and this one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub chart: usize,
    pub start: Vec2,
    pub end: Vec2,
    pub direction: Vec2,
    pub start_arclength: f64,
    pub entry: Vec<Crossing>,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.start.dist(self.end)
    }

    pub fn end_arclength(&self) -> f64 {
        self.start_arclength + self.length()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceResult {
    pub start: GeodesicState,
    pub segments: Vec<Segment>,
    pub events: Vec<TraceEvent>,
    pub total_length: f64,
    /// `(T, m(T))`: minimum distance to the singular set along the trace up to `T`.
    pub min_distance_series: Vec<(f64, f64)>,
    /// Period when the trace closed up (SelfRecurrence).
    pub period: Option<f64>,
}

impl TraceResult {
    pub fn end_state(&self) -> GeodesicState {
        let s = self.segments.last().expect("trace has a segment");
        GeodesicState { chart: s.chart, point: s.end, direction: s.direction, arclength: self.total_length }
    }

    pub fn cone_hit(&self) -> Option<&TraceEvent> {
        self.events.iter().find(|e| matches!(e, TraceEvent::ConeHit { .. }))
    }

    pub fn is_closed(&self) -> bool {
        self.period.is_some()
    }

    pub fn final_min_distance(&self) -> f64 {
        self.min_distance_series.last().map(|p| p.1).unwrap_or(f64::INFINITY)
    }

    /// Minimum distance to the singular set over `[0, t]`.
    pub fn min_distance_at(&self, t: f64) -> f64 {
        let idx = self.min_distance_series.partition_point(|p| p.0 <= t + 1e-12);
        if idx == 0 {
            f64::INFINITY
        } else {
            self.min_distance_series[idx - 1].1
        }
    }

    /// Chart, point and direction at arclength `s`; closed traces are periodic.
    pub fn locate(&self, s: f64) -> Option<(usize, Vec2, Vec2)> {
        let s = match self.period {
            Some(p) => wrap(s, p),
            None => {
                if s < -1e-12 || s > self.total_length + 1e-12 {
                    return None;
                }
                s.clamp(0.0, self.total_length)
            }
        };
        let idx = self.segments.partition_point(|seg| seg.start_arclength <= s).max(1) - 1;
        let seg = &self.segments[idx];
        let local = (s - seg.start_arclength).clamp(0.0, seg.length());
        Some((seg.chart, seg.start + seg.direction * local, seg.direction))
    }
}

struct Tracer<'a> {
    surface: &'a ConeSurface,
    opts: TraceOptions,
    start: GeodesicState,
    segments: Vec<Segment>,
    events: Vec<TraceEvent>,
    series: Vec<(f64, f64)>,
    running_min: f64,
    /// Index of the next uniform sample, taken at `index * step`.
    next_sample: u64,
    period: Option<f64>,
}

/// Follow the geodesic from `start` for at most `opts.max_length`.
pub fn trace(surface: &ConeSurface, start: GeodesicState, opts: TraceOptions) -> Result<TraceResult, TraceError> {
    if !(opts.max_length > 0.0) {
        return Err(TraceError::NonPositiveLength);
    }
    let chart = surface.charts.get(start.chart).ok_or(TraceError::UnknownChart(start.chart))?;
    let dir = start.direction.normalized().ok_or(TraceError::ZeroDirection)?;
    if !start.point.is_finite() || !contains_point(&chart.vertices, start.point, surface.tol.len.max(surface.tol.hit)) {
        return Err(TraceError::StartOutsideSurface(start.chart));
    }
    let start = GeodesicState { direction: dir, arclength: 0.0, ..start };

    let start_vertex = chart.vertices.iter().position(|v| v.dist(start.point) <= surface.tol.hit);
    if let Some(v) = start_vertex {
        let corner_angle = chart.corner_angle(v);
        let rel = crate::geom::ccw_angle(chart.vertex(v + 1) - chart.vertex(v), dir);
        if rel > corner_angle + surface.tol.angle && rel < std::f64::consts::TAU - surface.tol.angle {
            return Err(TraceError::DirectionOutsideCorner);
        }
    }

    let mut t = Tracer {
        surface,
        opts,
        start,
        segments: Vec::new(),
        events: Vec::new(),
        series: Vec::new(),
        running_min: f64::INFINITY,
        next_sample: 0,
        period: None,
    };
    t.run(start_vertex)?;
    let total_length = t.segments.last().map(Segment::end_arclength).unwrap_or(0.0);
    Ok(TraceResult {
        start: t.start,
        segments: t.segments,
        events: t.events,
        total_length,
        min_distance_series: t.series,
        period: t.period,
    })
}

enum StepEnd {
    Exit { edge: usize, t: f64 },
    Vertex { vertex: usize, t: f64 },
    Length { t: f64 },
}

impl<'a> Tracer<'a> {
    fn run(&mut self, start_vertex: Option<usize>) -> Result<(), TraceError> {
        let s = self.surface;
        let tol = s.tol;
        let mut chart = self.start.chart;
        let mut point = self.start.point;
        let mut dir = self.start.direction;
        let mut arclength = 0.0;
        let mut entry_edge: Option<usize> = None;
        let mut skip_vertex = start_vertex;
        let mut entry: Vec<Crossing> = Vec::new();
        let mut stalls = 0usize;
        self.record_point(chart, point, 0.0);

        for _ in 0..self.opts.max_steps {
            let poly = &s.charts[chart];
            let n = poly.len();
            let remaining = self.opts.max_length - arclength;

            let mut exit: Option<(usize, f64)> = None;
            for i in 0..n {
                if Some(i) == entry_edge {
                    continue;
                }
                let (a, b) = poly.edge(i);
                let e = b - a;
                let outward = Vec2::new(e.y, -e.x);
                let den = dir.dot(outward);
                if den <= 0.0 {
                    continue;
                }
                let tt = (a - point).dot(outward) / den;
                if tt < -tol.hit {
                    continue;
                }
                // leaving a vertex along one of its own edges is not an exit through that edge
                if skip_vertex.is_some_and(|v| i == v || (i + 1) % n == v) && tt <= tol.hit {
                    continue;
                }
                let hit = point + dir * tt;
                let u = (hit - a).dot(e) / e.norm_sq();
                let slack = tol.hit / e.norm();
                if u < -slack || u > 1.0 + slack {
                    continue;
                }
                if exit.is_none_or(|(_, best)| tt < best) {
                    exit = Some((i, tt.max(0.0)));
                }
            }
            let t_exit = exit.map_or(f64::INFINITY, |e| e.1);

            let mut vhit: Option<(usize, f64)> = None;
            for (k, q) in poly.vertices.iter().enumerate() {
                if Some(k) == skip_vertex {
                    continue;
                }
                let w = *q - point;
                let along = w.dot(dir);
                if along < -tol.hit || along > t_exit.min(remaining) + tol.hit {
                    continue;
                }
                if dir.cross(w).abs() <= tol.hit && vhit.is_none_or(|(_, best)| along < best) {
                    vhit = Some((k, along.max(0.0)));
                }
            }

            let end = match (vhit, exit) {
                (Some((k, tv)), _) => StepEnd::Vertex { vertex: k, t: tv },
                (None, Some((_, te))) if remaining <= te => StepEnd::Length { t: remaining },
                (None, Some((e, te))) => StepEnd::Exit { edge: e, t: te },
                (None, None) => StepEnd::Length { t: remaining },
            };
            let (seg_len, seg_end) = match end {
                StepEnd::Exit { t, .. } | StepEnd::Length { t } => (t, point + dir * t),
                StepEnd::Vertex { vertex, t } => (t, poly.vertex(vertex)),
            };
            if seg_len <= 1e-15 {
                stalls += 1;
                if stalls > 64 {
                    return Err(TraceError::Stalled(stalls));
                }
            } else {
                stalls = 0;
            }

            // Recurrence: does this segment run through the start state again?
            if self.opts.detect_recurrence && chart == self.start.chart && (dir - self.start.direction).norm() < tol.rec {
                let w = self.start.point - point;
                let along = w.dot(dir);
                let off = dir.cross(w).abs();
                if off < tol.rec && along > -tol.rec && along <= seg_len + tol.rec && arclength + along > tol.rec.max(1e-9) {
                    let along = along.clamp(0.0, seg_len);
                    let residual = (point + dir * along).dist(self.start.point);
                    self.push_segment(chart, point, point + dir * along, dir, arclength, std::mem::take(&mut entry));
                    arclength += along;
                    self.period = Some(arclength);
                    self.events.push(TraceEvent::SelfRecurrence { arclength, residual });
                    return Ok(());
                }
            }

            self.push_segment(chart, point, seg_end, dir, arclength, std::mem::take(&mut entry));
            arclength += seg_len;

            match end {
                StepEnd::Length { .. } => {
                    self.events.push(TraceEvent::MaxLengthReached { arclength });
                    return Ok(());
                }
                StepEnd::Exit { edge, .. } => {
                    let crossing = s.crossing(chart, edge);
                    let (partner, iso) = s.apply_crossing(crossing);
                    self.events.push(TraceEvent::EdgeCross { arclength, crossing, from_chart: chart, to_chart: partner.chart });
                    point = iso.apply(seg_end);
                    dir = iso.apply_vec(dir);
                    chart = partner.chart;
                    entry_edge = Some(partner.edge);
                    skip_vertex = None;
                    entry = vec![crossing];
                }
                StepEnd::Vertex { vertex, .. } => {
                    let class = s.class_of(chart, vertex);
                    let incoming = s.cone_coordinate(chart, vertex, -dir);
                    let sector = continuation_sector(s, class, incoming).expect("class exists");
                    let cls = &s.vertex_classes[class];
                    let outgoing = if !cls.singular {
                        Some(wrap(incoming + std::f64::consts::PI, cls.angle))
                    } else if self.opts.stop_on_cone || cls.kind == SingularityKind::Small {
                        None
                    } else if cls.kind == SingularityKind::Marked {
                        Some(wrap(incoming + std::f64::consts::PI, cls.angle))
                    } else {
                        Some(sector.center())
                    };
                    let Some(outgoing) = outgoing else {
                        self.events.push(TraceEvent::ConeHit { arclength, class, chart, vertex, sector, continued: None });
                        return Ok(());
                    };
                    let (corner, new_dir) = s.direction_at(class, outgoing);
                    let crossings = walk_corners(s, class, s.corner_slot(chart, vertex).1, s.corner_slot(corner.chart, corner.vertex).1);
                    let passage = Passage { outgoing, crossings: crossings.clone() };
                    if cls.singular {
                        self.events.push(TraceEvent::ConeHit { arclength, class, chart, vertex, sector, continued: Some(passage) });
                    } else {
                        self.events.push(TraceEvent::VertexPass { arclength, class, passage });
                    }
                    chart = corner.chart;
                    point = s.charts[chart].vertex(corner.vertex);
                    dir = new_dir;
                    entry_edge = None;
                    skip_vertex = Some(corner.vertex);
                    entry = crossings;
                }
            }
        }
        Err(TraceError::Stalled(self.opts.max_steps))
    }

    fn push_segment(&mut self, chart: usize, start: Vec2, end: Vec2, dir: Vec2, s0: f64, entry: Vec<Crossing>) {
        let len = start.dist(end);
        let step = self.opts.sample_step.filter(|h| *h > 0.0);
        let nearby = self.surface.nearby_singularities(chart);
        let dist_upto = |upto: f64| -> f64 {
            let b = start + dir * upto;
            nearby.iter().map(|q| point_segment_distance(q.position, start, b).0).fold(f64::INFINITY, f64::min)
        };
        if let Some(h) = step {
            let at = |i: u64| i as f64 * h;
            while at(self.next_sample) <= s0 {
                self.next_sample += 1;
            }
            while at(self.next_sample) < s0 + len {
                let t = at(self.next_sample);
                self.running_min = self.running_min.min(dist_upto(t - s0));
                self.series.push((t, self.running_min));
                self.next_sample += 1;
            }
        }
        self.running_min = self.running_min.min(dist_upto(len));
        if self.series.last().is_none_or(|p| p.0 < s0 + len) {
            self.series.push((s0 + len, self.running_min));
        } else if let Some(last) = self.series.last_mut() {
            last.1 = self.running_min;
        }
        self.segments.push(Segment { chart, start, end, direction: dir, start_arclength: s0, entry });
    }

    fn record_point(&mut self, chart: usize, p: Vec2, s: f64) {
        let m = self
            .surface
            .nearby_singularities(chart)
            .iter()
            .map(|q| q.position.dist(p))
            .fold(f64::INFINITY, f64::min);
        self.running_min = m;
        self.series.push((s, m));
    }
}

/// Gluings crossed walking counterclockwise from corner slot `from` to `to`.
pub(crate) fn walk_corners(s: &ConeSurface, class: usize, from: usize, to: usize) -> Vec<Crossing> {
    let corners = &s.vertex_classes[class].corners;
    let m = corners.len();
    let mut out = Vec::new();
    let mut i = from;
    while i != to {
        let c = corners[i];
        let n = s.charts[c.chart].len();
        out.push(s.crossing(c.chart, (c.vertex + n - 1) % n));
        i = (i + 1) % m;
    }
    out
}

/// Start a trace at a vertex, leaving along cone coordinate `phi`.
pub fn trace_from_cone(
    surface: &ConeSurface,
    class: usize,
    phi: f64,
    opts: TraceOptions,
) -> Result<TraceResult, TraceError> {
    let (corner, dir) = surface.direction_at(class, phi);
    let p = surface.charts[corner.chart].vertex(corner.vertex);
    trace(surface, GeodesicState::new(corner.chart, p, dir), opts)
}
