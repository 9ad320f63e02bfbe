//! Closed Euclidean cone surfaces presented as planar polygons glued along
//! their edges.
//!
//! Every polygon is a chart with its own Euclidean coordinates. Each edge is
//! glued to exactly one other edge by a direct isometry that reverses the
//! traversal direction, so the result is a closed oriented surface whose
//! only possible singularities sit at polygon corners. Corners are grouped
//! into vertex classes by walking around each vertex; the total corner angle
//! of a class is its cone angle.

mod description;

pub use description::{GluingDescription, PolygonDescription, SurfaceDescription};

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{self, ccw_angle, Isometry, Vec2};
use crate::tolerance::Tolerances;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("could not parse surface description: {0}")]
    Parse(String),
    #[error("polygon '{0}' has fewer than 3 vertices")]
    TooFewVertices(String),
    #[error("polygon '{0}' has a non-finite coordinate")]
    NonFinite(String),
    #[error("polygon '{0}' is not simple")]
    NonSimplePolygon(String),
    #[error("polygon '{0}' is not strictly counterclockwise")]
    OrientationError(String),
    #[error("polygon id '{0}' is used twice")]
    DuplicateChartId(String),
    #[error("gluing {gluing} references unknown polygon '{id}'")]
    UnknownChart { gluing: usize, id: String },
    #[error("gluing {gluing} references edge {edge} of polygon '{id}', which has {count} edges")]
    EdgeIndexOutOfRange { gluing: usize, id: String, edge: usize, count: usize },
    #[error("gluing {gluing}: edge lengths differ ({len_a} vs {len_b})")]
    EdgeLengthMismatch { gluing: usize, len_a: f64, len_b: f64 },
    #[error("gluing {gluing} glues edge {edge} of '{id}' to itself")]
    SelfGluedEdge { gluing: usize, id: String, edge: usize },
    #[error("edge {edge} of polygon '{id}' is glued more than once")]
    EdgeGluedTwice { id: String, edge: usize },
    #[error("edge {edge} of polygon '{id}' is not glued")]
    UnmatchedEdge { id: String, edge: usize },
    #[error("surface has {0} connected components")]
    DisconnectedSurface(usize),
    #[error("regular vertex ('{id}', {vertex}) has cone angle {angle}, not 2pi")]
    RegularVertexNotFlat { id: String, vertex: usize, angle: f64 },
    #[error("unknown vertex class {0}")]
    UnknownVertexClass(usize),
}

/// One polygon of the atlas, vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonChart {
    pub id: String,
    pub vertices: Vec<Vec2>,
}

impl PolygonChart {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Endpoints of edge `i` (from vertex `i` to vertex `i+1`).
    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    /// Interior angle at vertex `i`.
    pub fn corner_angle(&self, i: usize) -> f64 {
        let n = self.len();
        let p = self.vertices[i];
        ccw_angle(self.vertex(i + 1) - p, self.vertex(i + n - 1) - p)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max(a.dist(*b));
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub chart: usize,
    pub edge: usize,
}

/// A pair of glued edges. `a_to_b` carries chart `a` coordinates into chart
/// `b` coordinates, sending the start of edge `a` to the end of edge `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gluing {
    pub a: EdgeRef,
    pub b: EdgeRef,
    pub a_to_b: Isometry,
}

/// Passing through a gluing. `forward` is true when moving from side `a` to side `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub gluing: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularityKind {
    Small,
    Marked,
    Large,
}

/// A polygon corner that belongs to a vertex class. `offset` is where the
/// corner's angular range begins in the cone coordinate of its class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    pub chart: usize,
    pub vertex: usize,
    pub angle: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexClass {
    pub id: usize,
    /// Corners in counterclockwise order around the cone point.
    pub corners: Vec<Corner>,
    pub angle: f64,
    pub kind: SingularityKind,
    /// False only for 2pi classes declared regular in the description.
    pub singular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussBonnetReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SingularityPartition {
    pub small: Vec<usize>,
    pub marked: Vec<usize>,
    pub large: Vec<usize>,
}

/// Singular vertex developed into a chart's coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearbySingularity {
    pub position: Vec2,
    pub class: usize,
}

#[derive(Debug, Clone)]
pub struct ConeSurface {
    pub charts: Vec<PolygonChart>,
    pub gluings: Vec<Gluing>,
    pub vertex_classes: Vec<VertexClass>,
    pub euler_characteristic: i64,
    pub tol: Tolerances,
    /// Per (chart, edge): gluing index and whether this edge is side `a`.
    edge_gluing: Vec<Vec<(usize, bool)>>,
    /// Per (chart, vertex): (class id, index into that class's corners).
    corner_index: Vec<Vec<(usize, usize)>>,
    nearby: Vec<Vec<NearbySingularity>>,
    chart_ids: HashMap<String, usize>,
}

impl ConeSurface {
    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        Self::from_json_with(text, Tolerances::default())
    }

    pub fn from_json_with(text: &str, tol: Tolerances) -> Result<Self, SurfaceError> {
        let desc = SurfaceDescription::from_json(text).map_err(|e| SurfaceError::Parse(e.to_string()))?;
        build_surface(&desc, tol)
    }

    pub fn chart_index(&self, id: &str) -> Option<usize> {
        self.chart_ids.get(id).copied()
    }

    pub fn class_of(&self, chart: usize, vertex: usize) -> usize {
        self.corner_index[chart][vertex].0
    }

    /// (class, position within the class's corner list) of a polygon corner.
    pub fn corner_slot(&self, chart: usize, vertex: usize) -> (usize, usize) {
        self.corner_index[chart][vertex]
    }

    pub fn class(&self, id: usize) -> Result<&VertexClass, SurfaceError> {
        self.vertex_classes.get(id).ok_or(SurfaceError::UnknownVertexClass(id))
    }

    pub fn cone_angle(&self, id: usize) -> Result<f64, SurfaceError> {
        Ok(self.class(id)?.angle)
    }

    pub fn is_singular(&self, class: usize) -> bool {
        self.vertex_classes[class].singular
    }

    pub fn singular_classes(&self) -> impl Iterator<Item = &VertexClass> {
        self.vertex_classes.iter().filter(|c| c.singular)
    }

    /// Gluing used when leaving `chart` through `edge`.
    pub fn crossing(&self, chart: usize, edge: usize) -> Crossing {
        let (gluing, is_a) = self.edge_gluing[chart][edge];
        Crossing { gluing, forward: is_a }
    }

    /// Partner edge and the isometry from this chart into the partner chart.
    pub fn across(&self, chart: usize, edge: usize) -> (EdgeRef, Isometry) {
        let c = self.crossing(chart, edge);
        self.apply_crossing(c)
    }

    pub fn apply_crossing(&self, c: Crossing) -> (EdgeRef, Isometry) {
        let g = &self.gluings[c.gluing];
        if c.forward {
            (g.b, g.a_to_b)
        } else {
            (g.a, g.a_to_b.inverse())
        }
    }

    pub fn max_chart_diameter(&self) -> f64 {
        self.charts.iter().map(PolygonChart::diameter).fold(0.0, f64::max)
    }

    pub fn total_area(&self) -> f64 {
        self.charts.iter().map(|c| geom::signed_area(&c.vertices)).sum()
    }

    /// Singular vertices of a chart and of its edge neighbours, in the
    /// chart's coordinates.
    pub fn nearby_singularities(&self, chart: usize) -> &[NearbySingularity] {
        &self.nearby[chart]
    }

    /// Cone coordinate in `[0, angle)` of a direction leaving the vertex of a corner.
    pub fn cone_coordinate(&self, chart: usize, vertex: usize, dir: Vec2) -> f64 {
        let (cls, slot) = self.corner_index[chart][vertex];
        let class = &self.vertex_classes[cls];
        let corner = class.corners[slot];
        let ch = &self.charts[chart];
        let out = ch.vertex(vertex + 1) - ch.vertex(vertex);
        let mut local = ccw_angle(out, dir);
        // directions just clockwise of the outgoing edge belong to the edge itself
        if local > corner.angle + self.tol.angle && TAU - local <= self.tol.angle {
            local = 0.0;
        }
        geom::wrap(corner.offset + local.min(corner.angle), class.angle)
    }

    /// Inverse of [`cone_coordinate`](Self::cone_coordinate): the corner that
    /// contains cone coordinate `phi` and the chart direction realizing it.
    pub fn direction_at(&self, class: usize, phi: f64) -> (Corner, Vec2) {
        let cls = &self.vertex_classes[class];
        let phi = geom::wrap(phi, cls.angle);
        let mut pick = cls.corners[cls.corners.len() - 1];
        for c in &cls.corners {
            if phi < c.offset + c.angle - self.tol.angle.min(c.angle * 0.5) {
                pick = *c;
                break;
            }
        }
        let ch = &self.charts[pick.chart];
        let out = (ch.vertex(pick.vertex + 1) - ch.vertex(pick.vertex)).normalized().unwrap();
        let local = (phi - pick.offset).max(0.0);
        (pick, out.rotate(geom::Rotation::from_angle(local)))
    }

    pub fn validate_gauss_bonnet(&self) -> GaussBonnetReport {
        let lhs: f64 = self.vertex_classes.iter().map(|c| TAU - c.angle).sum();
        let rhs = TAU * self.euler_characteristic as f64;
        let residual = (lhs - rhs).abs();
        GaussBonnetReport { lhs, rhs, residual, ok: residual <= self.tol.angle * self.vertex_classes.len().max(1) as f64 }
    }

    pub fn classify_singularities(&self) -> SingularityPartition {
        let mut p = SingularityPartition::default();
        for c in &self.vertex_classes {
            match c.kind {
                SingularityKind::Small => p.small.push(c.id),
                SingularityKind::Marked => p.marked.push(c.id),
                SingularityKind::Large => p.large.push(c.id),
            }
        }
        p
    }

    pub fn to_description(&self) -> SurfaceDescription {
        let polygons = self
            .charts
            .iter()
            .map(|c| PolygonDescription { id: c.id.clone(), vertices: c.vertices.iter().map(|p| [p.x, p.y]).collect() })
            .collect();
        let gluings = self
            .gluings
            .iter()
            .map(|g| GluingDescription {
                a: (self.charts[g.a.chart].id.clone(), g.a.edge),
                b: (self.charts[g.b.chart].id.clone(), g.b.edge),
            })
            .collect();
        let regular_vertices = self
            .vertex_classes
            .iter()
            .filter(|c| !c.singular)
            .map(|c| (self.charts[c.corners[0].chart].id.clone(), c.corners[0].vertex))
            .collect();
        SurfaceDescription { polygons, gluings, regular_vertices }
    }
}

pub fn build_surface(desc: &SurfaceDescription, tol: Tolerances) -> Result<ConeSurface, SurfaceError> {
    let mut charts = Vec::with_capacity(desc.polygons.len());
    let mut chart_ids = HashMap::new();
    for poly in &desc.polygons {
        if poly.vertices.len() < 3 {
            return Err(SurfaceError::TooFewVertices(poly.id.clone()));
        }
        let vertices: Vec<Vec2> = poly.vertices.iter().map(|v| Vec2::new(v[0], v[1])).collect();
        if !vertices.iter().all(|v| v.is_finite()) {
            return Err(SurfaceError::NonFinite(poly.id.clone()));
        }
        if !geom::is_simple(&vertices, tol.len) {
            return Err(SurfaceError::NonSimplePolygon(poly.id.clone()));
        }
        if geom::signed_area(&vertices) <= 0.0 {
            return Err(SurfaceError::OrientationError(poly.id.clone()));
        }
        if chart_ids.insert(poly.id.clone(), charts.len()).is_some() {
            return Err(SurfaceError::DuplicateChartId(poly.id.clone()));
        }
        charts.push(PolygonChart { id: poly.id.clone(), vertices });
    }

    let mut edge_gluing: Vec<Vec<Option<(usize, bool)>>> = charts.iter().map(|c| vec![None; c.len()]).collect();
    let mut gluings = Vec::with_capacity(desc.gluings.len());
    for (gi, g) in desc.gluings.iter().enumerate() {
        let resolve = |(id, edge): &(String, usize)| -> Result<EdgeRef, SurfaceError> {
            let chart = *chart_ids.get(id).ok_or_else(|| SurfaceError::UnknownChart { gluing: gi, id: id.clone() })?;
            let count = charts[chart].len();
            if *edge >= count {
                return Err(SurfaceError::EdgeIndexOutOfRange { gluing: gi, id: id.clone(), edge: *edge, count });
            }
            Ok(EdgeRef { chart, edge: *edge })
        };
        let a = resolve(&g.a)?;
        let b = resolve(&g.b)?;
        if a == b {
            return Err(SurfaceError::SelfGluedEdge { gluing: gi, id: g.a.0.clone(), edge: a.edge });
        }
        let (a0, a1) = charts[a.chart].edge(a.edge);
        let (b0, b1) = charts[b.chart].edge(b.edge);
        let (la, lb) = (a0.dist(a1), b0.dist(b1));
        if (la - lb).abs() > tol.len {
            return Err(SurfaceError::EdgeLengthMismatch { gluing: gi, len_a: la, len_b: lb });
        }
        for (e, is_a) in [(a, true), (b, false)] {
            let slot = &mut edge_gluing[e.chart][e.edge];
            if slot.is_some() {
                return Err(SurfaceError::EdgeGluedTwice { id: charts[e.chart].id.clone(), edge: e.edge });
            }
            *slot = Some((gi, is_a));
        }
        gluings.push(Gluing { a, b, a_to_b: Isometry::from_segments(a0, a1, b1, b0) });
    }
    let mut edges = Vec::with_capacity(charts.len());
    for (ci, row) in edge_gluing.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (ei, slot) in row.iter().enumerate() {
            out.push(slot.ok_or_else(|| SurfaceError::UnmatchedEdge { id: charts[ci].id.clone(), edge: ei })?);
        }
        edges.push(out);
    }
    let edge_gluing = edges;

    let components = count_components(charts.len(), gluings.iter().map(|g| (g.a.chart, g.b.chart)));
    if components != 1 {
        return Err(SurfaceError::DisconnectedSurface(components));
    }

    // Corner orbits, walked counterclockwise around each vertex.
    let mut corner_index: Vec<Vec<Option<(usize, usize)>>> = charts.iter().map(|c| vec![None; c.len()]).collect();
    let mut vertex_classes = Vec::new();
    for ci in 0..charts.len() {
        for vi in 0..charts[ci].len() {
            if corner_index[ci][vi].is_some() {
                continue;
            }
            let id = vertex_classes.len();
            let mut corners = Vec::new();
            let (mut c, mut v) = (ci, vi);
            let mut offset = 0.0;
            loop {
                corner_index[c][v] = Some((id, corners.len()));
                let angle = charts[c].corner_angle(v);
                corners.push(Corner { chart: c, vertex: v, angle, offset });
                offset += angle;
                let n = charts[c].len();
                let (g, is_a) = edge_gluing[c][(v + n - 1) % n];
                let next = if is_a { gluings[g].b } else { gluings[g].a };
                c = next.chart;
                v = next.edge;
                if corner_index[c][v].is_some() {
                    break;
                }
            }
            let angle = offset;
            let kind = if (angle - TAU).abs() <= tol.angle {
                SingularityKind::Marked
            } else if angle < TAU {
                SingularityKind::Small
            } else {
                SingularityKind::Large
            };
            vertex_classes.push(VertexClass { id, corners, angle, kind, singular: true });
        }
    }
    let corner_index: Vec<Vec<(usize, usize)>> =
        corner_index.into_iter().map(|row| row.into_iter().map(Option::unwrap).collect()).collect();

    for (id, vertex) in &desc.regular_vertices {
        let chart = *chart_ids.get(id).ok_or_else(|| SurfaceError::UnknownChart { gluing: usize::MAX, id: id.clone() })?;
        if *vertex >= charts[chart].len() {
            return Err(SurfaceError::EdgeIndexOutOfRange {
                gluing: usize::MAX,
                id: id.clone(),
                edge: *vertex,
                count: charts[chart].len(),
            });
        }
        let class = &mut vertex_classes[corner_index[chart][*vertex].0];
        if class.kind != SingularityKind::Marked {
            return Err(SurfaceError::RegularVertexNotFlat { id: id.clone(), vertex: *vertex, angle: class.angle });
        }
        class.singular = false;
    }

    let v = vertex_classes.len() as i64;
    let e = gluings.len() as i64;
    let f = charts.len() as i64;

    let mut surface = ConeSurface {
        charts,
        gluings,
        vertex_classes,
        euler_characteristic: v - e + f,
        tol,
        edge_gluing,
        corner_index,
        nearby: Vec::new(),
        chart_ids,
    };
    surface.nearby = (0..surface.charts.len()).map(|c| collect_nearby(&surface, c)).collect();
    Ok(surface)
}

fn collect_nearby(s: &ConeSurface, chart: usize) -> Vec<NearbySingularity> {
    let mut out: Vec<NearbySingularity> = Vec::new();
    let push = |p: Vec2, class: usize, out: &mut Vec<NearbySingularity>| {
        if !out.iter().any(|q| q.position.dist(p) <= s.tol.len) {
            out.push(NearbySingularity { position: p, class });
        }
    };
    let ch = &s.charts[chart];
    for (i, p) in ch.vertices.iter().enumerate() {
        let cls = s.class_of(chart, i);
        if s.is_singular(cls) {
            push(*p, cls, &mut out);
        }
    }
    for e in 0..ch.len() {
        let (other, iso) = s.across(chart, e);
        let back = iso.inverse();
        for (i, p) in s.charts[other.chart].vertices.iter().enumerate() {
            let cls = s.class_of(other.chart, i);
            if s.is_singular(cls) {
                push(back.apply(*p), cls, &mut out);
            }
        }
    }
    out
}

pub(crate) fn count_components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Both side angles of a passage through a cone point, given the cone
/// coordinates of the incoming (backward) ray and the outgoing ray.
pub fn side_angles(theta: f64, incoming: f64, outgoing: f64) -> (f64, f64) {
    let a = geom::wrap(outgoing - incoming, theta);
    (a, theta - a)
}

/// True when a passage with these side angles is locally length minimizing.
pub fn is_geodesic_passage(theta: f64, incoming: f64, outgoing: f64, tol: f64) -> bool {
    let (l, r) = side_angles(theta, incoming, outgoing);
    l >= PI - tol && r >= PI - tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn torus_has_one_flat_class() {
        let s = corpus::flat_torus();
        assert_eq!(s.vertex_classes.len(), 1);
        assert!((s.cone_angle(0).unwrap() - TAU).abs() < 1e-12);
        assert_eq!(s.euler_characteristic, 0);
        assert_eq!(s.vertex_classes[0].kind, SingularityKind::Marked);
        assert!(!s.vertex_classes[0].singular);
        assert!(corpus::marked_torus().vertex_classes[0].singular);
    }

    #[test]
    fn octagon_class() {
        let s = corpus::octagon();
        assert_eq!(s.vertex_classes.len(), 1);
        assert!((s.cone_angle(0).unwrap() - 6.0 * PI).abs() < 1e-12);
        assert_eq!(s.euler_characteristic, -2);
        let p = s.classify_singularities();
        assert!(p.small.is_empty() && p.marked.is_empty());
        assert_eq!(p.large, vec![0]);
    }

    #[test]
    fn pillowcase_classes() {
        let s = corpus::pillowcase();
        assert_eq!(s.vertex_classes.len(), 4);
        for c in &s.vertex_classes {
            assert!((c.angle - PI).abs() < 1e-12);
            assert_eq!(c.corners.len(), 2);
        }
        assert_eq!(s.euler_characteristic, 2);
        assert_eq!(s.classify_singularities().small.len(), 4);
    }

    #[test]
    fn gauss_bonnet_reports() {
        let t = corpus::flat_torus().validate_gauss_bonnet();
        assert_eq!((t.lhs, t.rhs), (0.0, 0.0));
        let o = corpus::octagon().validate_gauss_bonnet();
        assert!((o.lhs + 4.0 * PI).abs() < 1e-12 && (o.rhs + 4.0 * PI).abs() < 1e-12 && o.ok);
        let p = corpus::pillowcase().validate_gauss_bonnet();
        assert!((p.lhs - 4.0 * PI).abs() < 1e-12 && (p.rhs - 4.0 * PI).abs() < 1e-12 && p.ok);
    }

    #[test]
    fn unknown_class() {
        assert_eq!(corpus::octagon().cone_angle(3), Err(SurfaceError::UnknownVertexClass(3)));
    }

    #[test]
    fn edge_length_mismatch() {
        let text = r#"{"polygons":[{"id":"sq","vertices":[[0,0],[1,0],[1,1],[0,1]]},
            {"id":"r","vertices":[[0,0],[2,0],[2,1],[0,1]]}],
            "gluings":[{"a":["sq",0],"b":["r",2]},{"a":["sq",2],"b":["r",0]},
                       {"a":["sq",1],"b":["sq",3]},{"a":["r",1],"b":["r",3]}]}"#;
        assert!(matches!(ConeSurface::from_json(text), Err(SurfaceError::EdgeLengthMismatch { gluing: 0, .. })));
    }

    #[test]
    fn structural_errors() {
        let unmatched = r#"{"polygons":[{"id":"sq","vertices":[[0,0],[1,0],[1,1],[0,1]]}],
            "gluings":[{"a":["sq",0],"b":["sq",2]}]}"#;
        assert!(matches!(ConeSurface::from_json(unmatched), Err(SurfaceError::UnmatchedEdge { edge: 1, .. })));
        let cw = r#"{"polygons":[{"id":"sq","vertices":[[0,0],[0,1],[1,1],[1,0]]}],
            "gluings":[{"a":["sq",0],"b":["sq",2]},{"a":["sq",1],"b":["sq",3]}]}"#;
        assert!(matches!(ConeSurface::from_json(cw), Err(SurfaceError::OrientationError(_))));
        let bow = r#"{"polygons":[{"id":"sq","vertices":[[0,0],[1,1],[1,0],[0,1]]}],
            "gluings":[{"a":["sq",0],"b":["sq",2]},{"a":["sq",1],"b":["sq",3]}]}"#;
        assert!(matches!(ConeSurface::from_json(bow), Err(SurfaceError::NonSimplePolygon(_))));
        let two = r#"{"polygons":[{"id":"a","vertices":[[0,0],[1,0],[1,1],[0,1]]},
            {"id":"b","vertices":[[0,0],[1,0],[1,1],[0,1]]}],
            "gluings":[{"a":["a",0],"b":["a",2]},{"a":["a",1],"b":["a",3]},
                       {"a":["b",0],"b":["b",2]},{"a":["b",1],"b":["b",3]}]}"#;
        assert_eq!(ConeSurface::from_json(two).unwrap_err(), SurfaceError::DisconnectedSurface(2));
        let selfglue = r#"{"polygons":[{"id":"sq","vertices":[[0,0],[1,0],[1,1],[0,1]]}],
            "gluings":[{"a":["sq",0],"b":["sq",0]}]}"#;
        assert!(matches!(ConeSurface::from_json(selfglue), Err(SurfaceError::SelfGluedEdge { .. })));
    }

    #[test]
    fn gluing_maps_edge_endpoints_reversed() {
        for s in corpus::all() {
            for g in &s.gluings {
                let (a0, a1) = s.charts[g.a.chart].edge(g.a.edge);
                let (b0, b1) = s.charts[g.b.chart].edge(g.b.edge);
                assert!(g.a_to_b.apply(a0).dist(b1) <= s.tol.len);
                assert!(g.a_to_b.apply(a1).dist(b0) <= s.tol.len);
            }
        }
    }

    #[test]
    fn corners_visited_once() {
        for s in corpus::all() {
            let total: usize = s.vertex_classes.iter().map(|c| c.corners.len()).sum();
            let expected: usize = s.charts.iter().map(|c| c.len()).sum();
            assert_eq!(total, expected);
            for c in &s.vertex_classes {
                let sum: f64 = c.corners.iter().map(|k| k.angle).sum();
                assert!((sum - c.angle).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cone_coordinate_round_trip() {
        let s = corpus::octagon();
        for k in 0..60 {
            let phi = k as f64 * 0.3 + 0.01;
            let phi = geom::wrap(phi, s.vertex_classes[0].angle);
            let (corner, dir) = s.direction_at(0, phi);
            let back = s.cone_coordinate(corner.chart, corner.vertex, dir);
            assert!((back - phi).abs() < 1e-9, "{phi} -> {back}");
        }
    }

    #[test]
    fn description_round_trip() {
        for s in corpus::all() {
            let text = s.to_description().to_json();
            let again = ConeSurface::from_json(&text).unwrap();
            assert_eq!(again.euler_characteristic, s.euler_characteristic);
            assert_eq!(again.vertex_classes.len(), s.vertex_classes.len());
            for (a, b) in again.vertex_classes.iter().zip(&s.vertex_classes) {
                assert!((a.angle - b.angle).abs() <= 1e-12);
                assert_eq!((a.kind, a.singular), (b.kind, b.singular));
            }
        }
    }
}
