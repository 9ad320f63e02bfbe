//! Branched covers assembled from per-gluing sheet permutations.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;

use serde::Serialize;
use thiserror::Error;

use crate::geom::Vec2;
use crate::perm::{PermError, Permutation};
use crate::surface::{
    build_surface, ConeSurface, Crossing, GluingDescription, PolygonDescription, SingularityKind, SurfaceDescription, SurfaceError,
};
use crate::tracer::{continuation_sector_for_arrival, Passage, Segment, TraceEvent, TraceResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("gluing {gluing}: {source}")]
    InvalidPermutation { gluing: usize, source: PermError },
    #[error("gluing {gluing}: permutation has degree {found}, expected {expected}")]
    DegreeMismatch { gluing: usize, expected: usize, found: usize },
    #[error("monodromy names gluing {0}, which does not exist")]
    UnknownGluing(usize),
    #[error("could not parse monodromy: {0}")]
    Parse(String),
    #[error("surface has no singularity of angle below 2pi")]
    NoSmallSingularities,
    #[error("no monodromy with the requested cycle types exists in degree {0}")]
    SearchExhausted(usize),
    #[error("monodromy search exceeded {0} nodes")]
    SearchBudgetExceeded(usize),
    #[error("trace meets branch class {class} at arclength {arclength}")]
    BranchPointOnPath { class: usize, arclength: f64 },
    #[error("sheet {0} is not in the extracted cover component")]
    SheetNotInCover(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Degree plus the sheet permutation attached to each gluing (identity when absent).
/// Crossing a gluing from its `a` side to its `b` side applies the permutation;
/// the reverse crossing applies its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    pub degree: usize,
    pub edge_permutations: BTreeMap<usize, Permutation>,
}

impl CoverSpec {
    pub fn trivial(degree: usize) -> Self {
        CoverSpec { degree, edge_permutations: BTreeMap::new() }
    }

    pub fn with(mut self, gluing: usize, p: Permutation) -> Self {
        self.edge_permutations.insert(gluing, p);
        self
    }

    pub fn sigma(&self, gluing: usize) -> Permutation {
        self.edge_permutations.get(&gluing).cloned().unwrap_or_else(|| Permutation::identity(self.degree))
    }

    pub fn transition(&self, c: Crossing) -> Permutation {
        let s = self.sigma(c.gluing);
        if c.forward { s } else { s.inverse() }
    }

    /// Parse `{"0": [2, 1], ...}`: gluing index to a 1-based one-line permutation.
    /// The degree is read from the permutations unless given.
    pub fn from_json(text: &str, degree: Option<usize>) -> Result<Self, CoverError> {
        let raw: BTreeMap<String, Vec<usize>> = serde_json::from_str(text).map_err(|e| CoverError::Parse(e.to_string()))?;
        let mut d = degree;
        let mut edge_permutations = BTreeMap::new();
        for (k, v) in raw {
            let g: usize = k.trim().parse().map_err(|_| CoverError::Parse(format!("gluing key '{k}' is not an index")))?;
            let expected = *d.get_or_insert(v.len());
            if v.len() != expected {
                return Err(CoverError::DegreeMismatch { gluing: g, expected, found: v.len() });
            }
            let p = Permutation::from_one_line(&v).map_err(|source| CoverError::InvalidPermutation { gluing: g, source })?;
            edge_permutations.insert(g, p);
        }
        let degree = d.ok_or_else(|| CoverError::Parse("empty monodromy needs an explicit degree".into()))?;
        let spec = CoverSpec { degree, edge_permutations };
        if degree == 0 {
            return Err(CoverError::ZeroDegree);
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let m: BTreeMap<String, Vec<usize>> =
            self.edge_permutations.iter().map(|(g, p)| (g.to_string(), p.one_line())).collect();
        serde_json::to_string_pretty(&m).expect("monodromy serializes")
    }

    fn check(&self, base: &ConeSurface) -> Result<(), CoverError> {
        if self.degree == 0 {
            return Err(CoverError::ZeroDegree);
        }
        for (&g, p) in &self.edge_permutations {
            if g >= base.gluings.len() {
                return Err(CoverError::UnknownGluing(g));
            }
            if p.degree() != self.degree {
                return Err(CoverError::DegreeMismatch { gluing: g, expected: self.degree, found: p.degree() });
            }
        }
        Ok(())
    }
}

/// Sheet permutation picked up walking once counterclockwise around `class`.
pub fn class_monodromy(base: &ConeSurface, spec: &CoverSpec, class: usize) -> Permutation {
    base.vertex_classes[class].corners.iter().fold(Permutation::identity(spec.degree), |acc, c| {
        let n = base.charts[c.chart].len();
        acc.then(&spec.transition(base.crossing(c.chart, (c.vertex + n - 1) % n)))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseBranching {
    pub class: usize,
    pub angle: f64,
    /// One-line notation, 1-based.
    pub monodromy: Vec<usize>,
    pub cycle_type: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverClassReport {
    pub class: usize,
    pub base_class: usize,
    pub local_degree: usize,
    pub angle: f64,
    pub angle_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub degree: usize,
    pub base: Vec<BaseBranching>,
    /// Classes of the extracted component.
    pub cover: Vec<CoverClassReport>,
    /// Of the whole cover, all components together.
    pub euler_characteristic: i64,
    pub base_euler_characteristic: i64,
    pub components: usize,
    pub connected: bool,
}

impl BranchReport {
    /// `sum (d_ij - 1)` over all base classes and cycles.
    pub fn ramification(&self) -> i64 {
        self.base.iter().flat_map(|b| b.cycle_type.iter()).map(|&k| k as i64 - 1).sum()
    }
}

/// `chi(cover) - d chi(base) + sum (d_ij - 1)`; zero for a correct assembly.
pub fn riemann_hurwitz_check(report: &BranchReport) -> i64 {
    report.euler_characteristic - report.degree as i64 * report.base_euler_characteristic + report.ramification()
}

/// A cover together with its projection data. When the assembled cover is
/// disconnected only the component containing sheet 1 of the first chart is kept.
#[derive(Debug, Clone)]
pub struct Cover {
    pub surface: ConeSurface,
    pub report: BranchReport,
    pub spec: CoverSpec,
    /// `(base chart, sheet)` of each cover chart; sheets are 0-based.
    pub sheets: Vec<(usize, usize)>,
    chart_of: HashMap<(usize, usize), usize>,
}

impl Cover {
    pub fn project_chart(&self, chart: usize) -> (usize, usize) {
        self.sheets[chart]
    }

    pub fn lift_chart(&self, base_chart: usize, sheet: usize) -> Option<usize> {
        self.chart_of.get(&(base_chart, sheet)).copied()
    }
}

fn cover_chart_id(id: &str, sheet: usize) -> String {
    format!("{id}#{}", sheet + 1)
}

/// Assemble the cover: `d` copies of every chart, gluings lifted sheet by sheet.
pub fn build_cover(base: &ConeSurface, spec: &CoverSpec) -> Result<Cover, CoverError> {
    spec.check(base)?;
    let d = spec.degree;
    let nb = base.charts.len();
    let node = |chart: usize, sheet: usize| sheet * nb + chart;
    let mut links = Vec::new();
    for (g, gl) in base.gluings.iter().enumerate() {
        let s = spec.sigma(g);
        for i in 0..d {
            links.push((g, i, node(gl.a.chart, i), node(gl.b.chart, s.apply(i))));
        }
    }
    // components of the sheet graph
    let mut comp = vec![usize::MAX; nb * d];
    let mut ncomp = 0;
    for start in 0..nb * d {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = ncomp;
        while let Some(x) = stack.pop() {
            for &(_, _, a, b) in &links {
                let y = if a == x { b } else if b == x { a } else { continue };
                if comp[y] == usize::MAX {
                    comp[y] = ncomp;
                    stack.push(y);
                }
            }
        }
        ncomp += 1;
    }

    let mut chi = 0;
    let mut kept = None;
    for k in 0..ncomp {
        let nodes: Vec<usize> = (0..nb * d).filter(|&x| comp[x] == k).collect();
        let part = assemble(base, spec, &nodes, &links)?;
        chi += part.0.euler_characteristic;
        if k == comp[node(0, 0)] {
            kept = Some(part);
        }
    }
    let (surface, sheets) = kept.expect("sheet 1 lies in some component");
    let chart_of = sheets.iter().enumerate().map(|(i, &cs)| (cs, i)).collect();

    let base_report = (0..base.vertex_classes.len())
        .map(|c| {
            let m = class_monodromy(base, spec, c);
            BaseBranching { class: c, angle: base.vertex_classes[c].angle, monodromy: m.one_line(), cycle_type: m.cycle_type() }
        })
        .collect();
    let cover = surface
        .vertex_classes
        .iter()
        .map(|vc| {
            let c0 = vc.corners[0];
            let (bc, _) = sheets[c0.chart];
            let base_class = base.class_of(bc, c0.vertex);
            let local_degree = vc.corners.len() / base.vertex_classes[base_class].corners.len();
            let expected = local_degree as f64 * base.vertex_classes[base_class].angle;
            CoverClassReport {
                class: vc.id,
                base_class,
                local_degree,
                angle: vc.angle,
                angle_ok: (vc.angle - expected).abs() <= base.tol.angle * local_degree as f64 * 10.0,
            }
        })
        .collect();
    let report = BranchReport {
        degree: d,
        base: base_report,
        cover,
        euler_characteristic: chi,
        base_euler_characteristic: base.euler_characteristic,
        components: ncomp,
        connected: ncomp == 1,
    };
    Ok(Cover { surface, report, spec: spec.clone(), sheets, chart_of })
}

type Link = (usize, usize, usize, usize);

fn assemble(base: &ConeSurface, spec: &CoverSpec, nodes: &[usize], links: &[Link]) -> Result<(ConeSurface, Vec<(usize, usize)>), CoverError> {
    let nb = base.charts.len();
    let base_desc = base.to_description();
    let sheets: Vec<(usize, usize)> = nodes.iter().map(|&x| (x % nb, x / nb)).collect();
    let polygons = sheets
        .iter()
        .map(|&(c, s)| PolygonDescription { id: cover_chart_id(&base.charts[c].id, s), vertices: base_desc.polygons[c].vertices.clone() })
        .collect();
    let gluings = links
        .iter()
        .filter(|l| nodes.contains(&l.2))
        .map(|&(g, i, _, _)| {
            let gl = &base.gluings[g];
            let j = spec.sigma(g).apply(i);
            GluingDescription {
                a: (cover_chart_id(&base.charts[gl.a.chart].id, i), gl.a.edge),
                b: (cover_chart_id(&base.charts[gl.b.chart].id, j), gl.b.edge),
            }
        })
        .collect();
    let mut desc = SurfaceDescription { polygons, gluings, regular_vertices: Vec::new() };
    let first = build_surface(&desc, base.tol)?;
    // ordinary base points stay ordinary where the cover does not branch
    for vc in &first.vertex_classes {
        let c0 = vc.corners[0];
        let (bc, _) = sheets[c0.chart];
        let b = base.class_of(bc, c0.vertex);
        if !base.is_singular(b) && vc.corners.len() == base.vertex_classes[b].corners.len() {
            desc.regular_vertices.push((first.charts[c0.chart].id.clone(), c0.vertex));
        }
    }
    let surface = if desc.regular_vertices.is_empty() { first } else { build_surface(&desc, base.tol)? };
    Ok((surface, sheets))
}

/// Smallest odd `d` with `d theta > 2pi` for every class of angle below `2pi`.
pub fn default_odd_degree(surface: &ConeSurface) -> Result<usize, CoverError> {
    let small: Vec<f64> = surface
        .vertex_classes
        .iter()
        .filter(|c| c.kind == SingularityKind::Small)
        .map(|c| c.angle)
        .collect();
    let theta = small.iter().copied().fold(f64::INFINITY, f64::min);
    if small.is_empty() {
        return Err(CoverError::NoSmallSingularities);
    }
    let mut d = 1;
    while d as f64 * theta <= TAU + surface.tol.angle {
        d += 2;
    }
    Ok(d)
}

/// Which base classes the searched monodromy may branch over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchMode {
    /// Full `d`-cycles at small classes, identity everywhere else.
    Strict,
    /// Like `Strict`, but marked (angle 2pi) classes are unconstrained.
    Extended,
}

pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// First connected monodromy, in lexicographic order over the gluings, with
/// the cycle types prescribed by `mode`.
pub fn search_monodromy(base: &ConeSurface, degree: usize, mode: BranchMode, budget: usize) -> Result<CoverSpec, CoverError> {
    if degree == 0 {
        return Err(CoverError::ZeroDegree);
    }
    let ng = base.gluings.len();
    let walks: Vec<Vec<Crossing>> = base
        .vertex_classes
        .iter()
        .map(|vc| {
            vc.corners
                .iter()
                .map(|c| base.crossing(c.chart, (c.vertex + base.charts[c.chart].len() - 1) % base.charts[c.chart].len()))
                .collect()
        })
        .collect();
    let want: Vec<Option<Vec<usize>>> = base
        .vertex_classes
        .iter()
        .map(|vc| match (vc.kind, mode) {
            (SingularityKind::Small, _) => Some(vec![degree]),
            (SingularityKind::Marked, BranchMode::Extended) if vc.singular => None,
            _ => Some(vec![1; degree]),
        })
        .collect();
    // gluing order: finish the classes that need fewest new gluings first
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; ng];
    loop {
        let next = (0..walks.len())
            .filter(|&c| walks[c].iter().any(|x| !placed[x.gluing]))
            .min_by_key(|&c| (walks[c].iter().filter(|x| !placed[x.gluing]).count(), c));
        let Some(c) = next else { break };
        let mut gs: Vec<usize> = walks[c].iter().map(|x| x.gluing).filter(|&g| !placed[g]).collect();
        gs.sort_unstable();
        gs.dedup();
        for g in gs {
            placed[g] = true;
            order.push(g);
        }
    }
    order.extend((0..ng).filter(|&g| !placed[g]));
    // classes checkable once the gluing at this depth is set
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (c, w) in walks.iter().enumerate() {
        let depth = w.iter().map(|x| order.iter().position(|&g| g == x.gluing).unwrap()).max().unwrap_or(0);
        ready[depth].push(c);
    }
    let all = Permutation::all(degree);
    let mut spec = CoverSpec::trivial(degree);
    let mut nodes = 0usize;
    let mut choice = vec![0usize; order.len()];
    let mut depth = 0usize;
    loop {
        if depth == order.len() {
            let ok = build_cover(base, &spec).map(|c| c.report.connected).unwrap_or(false);
            if ok {
                spec.edge_permutations.retain(|_, p| !p.is_identity());
                return Ok(spec);
            }
            depth -= 1;
            choice[depth] += 1;
            continue;
        }
        if choice[depth] == all.len() {
            if depth == 0 {
                return Err(CoverError::SearchExhausted(degree));
            }
            choice[depth] = 0;
            depth -= 1;
            choice[depth] += 1;
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return Err(CoverError::SearchBudgetExceeded(budget));
        }
        spec.edge_permutations.insert(order[depth], all[choice[depth]].clone());
        let fits = ready[depth].iter().all(|&c| match &want[c] {
            Some(t) => class_monodromy(base, &spec, c).cycle_type() == *t,
            None => true,
        });
        if fits {
            depth += 1;
            if depth < order.len() {
                choice[depth] = 0;
            }
        } else {
            choice[depth] += 1;
        }
    }
}

fn vertex_at(surface: &ConeSurface, chart: usize, p: Vec2) -> Option<usize> {
    surface.charts[chart].vertices.iter().position(|v| v.dist(p) <= surface.tol.hit.max(surface.tol.len))
}

/// Lift a base trace to the cover, starting on `sheet` (0-based).
pub fn lift_trace(base: &ConeSurface, cover: &Cover, trace: &TraceResult, sheet: usize) -> Result<TraceResult, CoverError> {
    let d = cover.spec.degree;
    if sheet >= d {
        return Err(CoverError::SheetNotInCover(sheet));
    }
    let branched: Vec<bool> = cover.report.base.iter().map(|b| b.cycle_type[0] > 1).collect();
    let lift = |chart: usize, s: usize| cover.lift_chart(chart, s).ok_or(CoverError::SheetNotInCover(s));
    let apply = |s: usize, cs: &[Crossing]| cs.iter().fold(s, |s, &c| cover.spec.transition(c).apply(s));

    let mut segments: Vec<Segment> = Vec::with_capacity(trace.segments.len());
    let mut seg_sheets = Vec::with_capacity(trace.segments.len());
    let mut s = sheet;
    for seg in &trace.segments {
        s = apply(s, &seg.entry);
        seg_sheets.push(s);
        segments.push(Segment { chart: lift(seg.chart, s)?, entry: Vec::new(), ..seg.clone() });
    }
    // lifted gluing crossings for each segment entry
    let mut s = sheet;
    for (k, seg) in trace.segments.iter().enumerate() {
        let mut lifted = Vec::with_capacity(seg.entry.len());
        let mut chart = if k == 0 { trace.segments[0].chart } else { trace.segments[k - 1].chart };
        for &c in &seg.entry {
            lifted.push(lift_crossing(base, cover, chart, s, c)?);
            let (to, _) = base.apply_crossing(c);
            chart = to.chart;
            s = cover.spec.transition(c).apply(s);
        }
        segments[k].entry = lifted;
    }

    let seg_index = |t: f64| trace.segments.partition_point(|g| g.start_arclength <= t + 1e-12).max(1) - 1;
    let mut events = Vec::with_capacity(trace.events.len());
    for e in &trace.events {
        let ev = match e {
            TraceEvent::EdgeCross { arclength, crossing, from_chart, to_chart } => {
                let k = seg_index(*arclength);
                let to_sheet = seg_sheets[k];
                let from_sheet = cover.spec.transition(*crossing).inverse().apply(to_sheet);
                TraceEvent::EdgeCross {
                    arclength: *arclength,
                    crossing: lift_crossing(base, cover, *from_chart, from_sheet, *crossing)?,
                    from_chart: lift(*from_chart, from_sheet)?,
                    to_chart: lift(*to_chart, to_sheet)?,
                }
            }
            TraceEvent::VertexPass { arclength, class, passage } => {
                if branched[*class] {
                    return Err(CoverError::BranchPointOnPath { class: *class, arclength: *arclength });
                }
                let k = seg_index(*arclength);
                let (_, cls, p) = lifted_passage(base, cover, trace, &segments, k, passage)?;
                TraceEvent::VertexPass { arclength: *arclength, class: cls, passage: p }
            }
            TraceEvent::ConeHit { arclength, class, chart, vertex, continued, .. } => {
                if branched[*class] {
                    return Err(CoverError::BranchPointOnPath { class: *class, arclength: *arclength });
                }
                let k = trace.segments.iter().rposition(|g| g.end_arclength() <= arclength + 1e-9 && g.chart == *chart).unwrap_or(0);
                let cchart = segments[k].chart;
                let sector = continuation_sector_for_arrival(&cover.surface, cchart, *vertex, segments[k].direction)?;
                let continued = match continued {
                    Some(p) if k + 1 < segments.len() => Some(lifted_passage(base, cover, trace, &segments, k + 1, p)?.2),
                    _ => None,
                };
                TraceEvent::ConeHit {
                    arclength: *arclength,
                    class: cover.surface.class_of(cchart, *vertex),
                    chart: cchart,
                    vertex: *vertex,
                    sector,
                    continued,
                }
            }
            other => other.clone(),
        };
        events.push(ev);
    }
    // a closed base trace closes in the cover once the sheet returns
    let period = trace.period.and_then(|p| {
        let end = apply(sheet, &trace.segments.iter().flat_map(|g| g.entry.iter().copied()).collect::<Vec<_>>());
        (end == sheet).then_some(p)
    });
    Ok(TraceResult {
        start: crate::tracer::GeodesicState { chart: segments[0].chart, ..trace.start },
        segments,
        events,
        total_length: trace.total_length,
        min_distance_series: trace.min_distance_series.clone(),
        period,
    })
}

/// Number of base periods a closed base trace needs to close up in the cover.
pub fn lift_order(cover: &Cover, trace: &TraceResult, sheet: usize) -> usize {
    let crossings: Vec<Crossing> = trace.segments.iter().flat_map(|g| g.entry.iter().copied()).collect();
    let holonomy = crossings.iter().fold(Permutation::identity(cover.spec.degree), |acc, &c| acc.then(&cover.spec.transition(c)));
    holonomy.cycles().into_iter().find(|c| c.contains(&sheet)).map(|c| c.len()).unwrap_or(1)
}

fn lift_crossing(base: &ConeSurface, cover: &Cover, chart: usize, sheet: usize, c: Crossing) -> Result<Crossing, CoverError> {
    let gl = &base.gluings[c.gluing];
    let edge = if c.forward { gl.a.edge } else { gl.b.edge };
    let cchart = cover.lift_chart(chart, sheet).ok_or(CoverError::SheetNotInCover(sheet))?;
    Ok(cover.surface.crossing(cchart, edge))
}

fn lifted_passage(
    base: &ConeSurface,
    cover: &Cover,
    trace: &TraceResult,
    lifted: &[Segment],
    k: usize,
    passage: &Passage,
) -> Result<(usize, usize, Passage), CoverError> {
    let prev = &trace.segments[k.saturating_sub(1)];
    let (_, mut sheet) = cover.project_chart(lifted[k.saturating_sub(1)].chart);
    let mut chart = prev.chart;
    let mut crossings = Vec::with_capacity(passage.crossings.len());
    for &c in &passage.crossings {
        crossings.push(lift_crossing(base, cover, chart, sheet, c)?);
        chart = base.apply_crossing(c).0.chart;
        sheet = cover.spec.transition(c).apply(sheet);
    }
    let next = &lifted[k];
    let vertex = vertex_at(&cover.surface, next.chart, next.start).unwrap_or(0);
    let outgoing = cover.surface.cone_coordinate(next.chart, vertex, next.direction);
    Ok((next.chart, cover.surface.class_of(next.chart, vertex), Passage { outgoing, crossings }))
}

/// Base trace obtained by forgetting sheets.
pub fn project_trace(cover: &Cover, lifted: &TraceResult) -> Vec<(usize, Vec2, Vec2)> {
    lifted.segments.iter().map(|g| (cover.project_chart(g.chart).0, g.start, g.end)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::tracer::{trace, GeodesicState, TraceOptions};
    use std::f64::consts::PI;

    fn vef(s: &ConeSurface) -> i64 {
        let v = s.vertex_classes.len() as i64;
        let e = s.gluings.len() as i64;
        let f = s.charts.len() as i64;
        v - e + f
    }

    #[test]
    fn trivial_torus_cover() {
        let t = corpus::flat_torus();
        let c = build_cover(&t, &CoverSpec::trivial(1)).unwrap();
        assert_eq!(c.report.euler_characteristic, 0);
        assert_eq!(riemann_hurwitz_check(&c.report), 0);
        assert!(c.report.connected);
        assert!(!c.surface.is_singular(0));
        let r = trace(&t, GeodesicState::new(0, Vec2::new(0.2, 0.3), Vec2::new(1.0, 0.7)), TraceOptions::new(5.0)).unwrap();
        let l = lift_trace(&t, &c, &r, 0).unwrap();
        assert_eq!(l.segments, r.segments);
    }

    #[test]
    fn torus_double_cover() {
        let t = corpus::flat_torus();
        let spec = CoverSpec::trivial(2).with(0, Permutation::swap(2, 0, 1));
        let c = build_cover(&t, &spec).unwrap();
        assert!(c.report.connected);
        assert_eq!(c.report.euler_characteristic, 0);
        assert_eq!(vef(&c.surface), 0);
        assert_eq!(c.surface.vertex_classes.len(), 2);
        assert!(c.surface.vertex_classes.iter().all(|v| (v.angle - 2.0 * PI).abs() < 1e-9));
        assert_eq!(riemann_hurwitz_check(&c.report), 0);
        // horizontal circle crosses gluing 1 (edges 1 and 3), the vertical one crosses gluing 0
        let core = trace(&t, GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(0.0, 1.0)), TraceOptions::new(3.0).detect_recurrence(true)).unwrap();
        assert_eq!(lift_order(&c, &core, 0), 2);
        assert_eq!(lift_trace(&t, &c, &core, 0).unwrap().period, None);
    }

    #[test]
    fn pillowcase_triple_cover() {
        let p = corpus::pillowcase();
        assert_eq!(default_odd_degree(&p).unwrap(), 3);
        let spec = search_monodromy(&p, 3, BranchMode::Strict, DEFAULT_SEARCH_BUDGET).unwrap();
        let c = build_cover(&p, &spec).unwrap();
        assert!(c.report.connected);
        assert_eq!(c.report.euler_characteristic, -2);
        assert_eq!(vef(&c.surface), -2);
        assert_eq!(riemann_hurwitz_check(&c.report), 0);
        assert!(c.report.base.iter().all(|b| b.cycle_type == vec![3]));
        assert!(c.surface.vertex_classes.iter().all(|v| (v.angle - 3.0 * PI).abs() < 1e-9));
        assert!(c.report.cover.iter().all(|r| r.angle_ok && r.local_degree == 3));
        let back = CoverSpec::from_json(&spec.to_json(), Some(3)).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn degrees() {
        assert_eq!(default_odd_degree(&corpus::quarter_cone()).unwrap(), 5);
        assert_eq!(default_odd_degree(&corpus::octagon()).unwrap_err(), CoverError::NoSmallSingularities);
    }

    #[test]
    fn disconnected_cover_is_reported() {
        let t = corpus::marked_torus();
        let c = build_cover(&t, &CoverSpec::trivial(3)).unwrap();
        assert_eq!(c.report.components, 3);
        assert_eq!(c.surface.charts.len(), 1);
        assert_eq!(riemann_hurwitz_check(&c.report), 0);
    }

    #[test]
    fn bad_specs() {
        let t = corpus::flat_torus();
        assert!(matches!(CoverSpec::from_json(r#"{"0": [1, 1]}"#, None), Err(CoverError::InvalidPermutation { gluing: 0, .. })));
        assert!(matches!(CoverSpec::from_json(r#"{"0": [1, 2], "1": [1]}"#, None), Err(CoverError::DegreeMismatch { .. })));
        let spec = CoverSpec::trivial(2).with(7, Permutation::swap(2, 0, 1));
        assert_eq!(build_cover(&t, &spec).unwrap_err(), CoverError::UnknownGluing(7));
    }

    #[test]
    fn branch_point_on_path() {
        let p = corpus::pillowcase();
        let spec = search_monodromy(&p, 3, BranchMode::Strict, DEFAULT_SEARCH_BUDGET).unwrap();
        let c = build_cover(&p, &spec).unwrap();
        let r = trace(&p, GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(1.0, 1.0)), TraceOptions::new(5.0)).unwrap();
        assert!(matches!(lift_trace(&p, &c, &r, 0), Err(CoverError::BranchPointOnPath { .. })));
    }
}
