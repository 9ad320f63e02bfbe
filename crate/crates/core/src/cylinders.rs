//! Closed geodesics, the flat cylinders around them, and the density experiment.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::f64::consts::FRAC_PI_2;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::geom::{clip_half_plane, signed_area, Isometry, Rotation, Vec2};
use crate::saddles::{closed_chains, enumerate_saddles, PiecewiseGeodesic, SaddleConnection, SaddleError};
use crate::surface::ConeSurface;
use crate::tracer::{geodesic_distance, DistanceTable, trace, DistanceError, GeodesicState, SurfacePath, TraceError, TraceOptions, TraceResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CylinderError {
    #[error("quadrangle needs 0 < eps <= delta and 0 < theta < pi/2, got eps={eps}, delta={delta}, theta={theta}")]
    DomainError { eps: f64, delta: f64, theta: f64 },
    #[error("no closed geodesic found within the search budget")]
    NotFound,
    #[error("trace is not a closed geodesic")]
    NotClosed,
    #[error("sideways offset runs into a cone point after {0}")]
    OffsetHitsCone(f64),
    #[error("strip unfolding visited more than {0} chart copies")]
    UnfoldingBudgetExceeded(usize),
    #[error("length schedule must be positive and strictly increasing")]
    BadSchedule,
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Saddle(#[from] SaddleError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// Right-angled quadrangle cut out of two crossing strips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrangle {
    pub width: f64,
    pub length: f64,
    pub theta: f64,
    pub eps: f64,
    pub delta: f64,
}

/// Strip of width `eps` crossing a strip of width `delta` at angle `theta`.
pub fn strip_quadrangle(eps: f64, delta: f64, theta: f64) -> Result<Quadrangle, CylinderError> {
    if !(eps > 0.0 && eps <= delta && delta.is_finite() && theta > 0.0 && theta < FRAC_PI_2) {
        return Err(CylinderError::DomainError { eps, delta, theta });
    }
    Ok(Quadrangle {
        width: delta + eps / (2.0 * theta.cos()),
        length: eps / (2.0 * theta.sin()),
        theta,
        eps,
        delta,
    })
}

/// One-sided width of a cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Width {
    Finite(f64),
    Unbounded,
}

impl Width {
    pub fn value(self) -> Option<f64> {
        match self {
            Width::Finite(w) => Some(w),
            Width::Unbounded => None,
        }
    }
}

impl Serialize for Width {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Width::Finite(w) => s.serialize_f64(*w),
            Width::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

/// A closed geodesic with the widths of the flat strip on either side.
/// Left is the side the core's direction turns to counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cylinder {
    pub core: TraceResult,
    pub circumference: f64,
    pub width_left: Width,
    pub width_right: Width,
    /// Singular classes on each boundary line.
    pub boundary_left: Vec<usize>,
    pub boundary_right: Vec<usize>,
}

impl Cylinder {
    pub fn total_width(&self) -> Option<f64> {
        Some(self.width_left.value()? + self.width_right.value()?)
    }
}

/// Where to look for a closed geodesic.
#[derive(Debug, Clone, Copy)]
pub enum ClosedSeed<'a> {
    /// Launch from a regular point.
    Direction { chart: usize, point: Vec2, direction: Vec2 },
    /// Launch parallel to a saddle connection, next to its midpoint.
    Saddle(&'a SaddleConnection),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_length: f64,
    /// Number of perpendicular nudges tried when a launch runs into a cone point.
    pub attempts: usize,
    pub nudge: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_length: 200.0, attempts: 8, nudge: 1e-3 }
    }
}

/// Move a state sideways by `u` (positive to the left), keeping its heading.
pub fn offset_state(surface: &ConeSurface, state: GeodesicState, u: f64) -> Result<GeodesicState, CylinderError> {
    if u == 0.0 {
        return Ok(GeodesicState { arclength: 0.0, ..state });
    }
    let dir = state.direction.normalized().ok_or(TraceError::ZeroDirection)?;
    let side = if u > 0.0 { dir.perp() } else { -dir.perp() };
    let opts = TraceOptions::new(u.abs()).sample_step(None);
    let r = trace(surface, GeodesicState::new(state.chart, state.point, side), opts)?;
    if r.cone_hit().is_some() {
        return Err(CylinderError::OffsetHitsCone(r.total_length));
    }
    let end = r.end_state();
    let heading = if u > 0.0 { -end.direction.perp() } else { end.direction.perp() };
    Ok(GeodesicState::new(end.chart, end.point, heading))
}

fn closed_from(surface: &ConeSurface, start: GeodesicState, max_length: f64) -> Result<Option<TraceResult>, TraceError> {
    let r = trace(surface, start, TraceOptions::new(max_length).detect_recurrence(true).sample_step(None))?;
    Ok(r.is_closed().then_some(r))
}

/// Search for a closed geodesic and measure the cylinder around it. The
/// returned core runs through the middle of the cylinder when both widths
/// are finite.
pub fn find_closed_geodesic(
    surface: &ConeSurface,
    seed: ClosedSeed<'_>,
    budget: SearchBudget,
) -> Result<Cylinder, CylinderError> {
    let base = match seed {
        ClosedSeed::Direction { chart, point, direction } => GeodesicState::new(chart, point, direction),
        ClosedSeed::Saddle(s) => {
            let (chart, point, direction) = s.path.locate(s.length / 2.0).ok_or(CylinderError::NotFound)?;
            GeodesicState::new(chart, point, direction)
        }
    };
    let first = match seed {
        ClosedSeed::Direction { .. } => 0,
        ClosedSeed::Saddle(_) => 1,
    };
    for k in first..first + budget.attempts {
        let u = if k == 0 { 0.0 } else { budget.nudge * k.div_ceil(2) as f64 * if k % 2 == 1 { 1.0 } else { -1.0 } };
        let Ok(start) = offset_state(surface, base, u) else { continue };
        let Some(core) = closed_from(surface, start, budget.max_length)? else { continue };
        let cyl = cylinder_from_core(surface, core)?;
        return recenter(surface, cyl, budget);
    }
    Err(CylinderError::NotFound)
}

fn recenter(surface: &ConeSurface, cyl: Cylinder, budget: SearchBudget) -> Result<Cylinder, CylinderError> {
    let (Width::Finite(l), Width::Finite(r)) = (cyl.width_left, cyl.width_right) else {
        return Ok(cyl);
    };
    let u = (l - r) / 2.0;
    if u.abs() <= surface.tol.len {
        return Ok(cyl);
    }
    let start = offset_state(surface, cyl.core.start, u)?;
    match closed_from(surface, start, budget.max_length.max(2.0 * cyl.circumference))? {
        Some(core) => cylinder_from_core(surface, core),
        None => Ok(cyl),
    }
}

/// Widths and boundary classes of the cylinder around a closed core.
pub fn cylinder_from_core(surface: &ConeSurface, core: TraceResult) -> Result<Cylinder, CylinderError> {
    let (l, r) = strip_sides(surface, &core)?;
    let circumference = core.period.ok_or(CylinderError::NotClosed)?;
    Ok(Cylinder { core, circumference, width_left: l.0, width_right: r.0, boundary_left: l.1, boundary_right: r.1 })
}

/// One-sided widths `(d_L, d_R)` of the maximal flat strip around a closed core.
pub fn strip_width(surface: &ConeSurface, core: &TraceResult) -> Result<(Width, Width), CylinderError> {
    let (l, r) = strip_sides(surface, core)?;
    Ok((l.0, r.0))
}

/// Cap on reported widths, as a multiple of the largest chart diameter.
pub const WIDTH_CAP_FACTOR: f64 = 1000.0;
const STRIP_PIECE_BUDGET: usize = 2_000_000;

type Side = (Width, Vec<usize>);

fn strip_sides(surface: &ConeSurface, core: &TraceResult) -> Result<(Side, Side), CylinderError> {
    let c = core.period.ok_or(CylinderError::NotClosed)?;
    // chart-to-plane maps putting the core on the positive x axis
    let frames: Vec<(usize, Isometry)> = core
        .segments
        .iter()
        .map(|seg| {
            let rot = Rotation::between(seg.direction, Vec2::new(1.0, 0.0));
            let shift = Vec2::new(seg.start_arclength, 0.0) - seg.start.rotate(rot);
            (seg.chart, Isometry::new(rot, shift))
        })
        .collect();
    let cap = WIDTH_CAP_FACTOR * surface.max_chart_diameter();
    Ok((one_side(surface, &frames, c, 1.0, cap)?, one_side(surface, &frames, c, -1.0, cap)?))
}

fn one_side(surface: &ConeSurface, frames: &[(usize, Isometry)], c: f64, sign: f64, cap: f64) -> Result<Side, CylinderError> {
    let tol = surface.tol.len.max(surface.tol.hit);
    let key = |chart: usize, f: &Isometry| {
        let period = (c * 1e6).round() as i64;
        let x = ((f.shift.x.rem_euclid(c) * 1e6).round() as i64).rem_euclid(period.max(1));
        (chart, (f.rot.c * 1e6).round() as i64, (f.rot.s * 1e6).round() as i64, x, (f.shift.y * 1e6).round() as i64)
    };
    let mut best = cap;
    let mut boundary: Vec<usize> = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for (chart, f) in frames {
        if seen.insert(key(*chart, f)) {
            queue.push_back((*chart, *f));
        }
    }
    while let Some((chart, f)) = queue.pop_front() {
        if seen.len() > STRIP_PIECE_BUDGET {
            return Err(CylinderError::UnfoldingBudgetExceeded(STRIP_PIECE_BUDGET));
        }
        let ch = &surface.charts[chart];
        let poly: Vec<Vec2> = ch.vertices.iter().map(|&v| f.apply(v)).collect();
        let piece = clip_half_plane(&clip_half_plane(&poly, Vec2::new(0.0, -sign), 0.0), Vec2::new(0.0, sign), best);
        if piece.len() < 3 || signed_area(&piece).abs() <= tol * tol {
            continue;
        }
        for (v, &p) in poly.iter().enumerate() {
            let class = surface.class_of(chart, v);
            let h = sign * p.y;
            if !surface.is_singular(class) || h <= tol {
                continue;
            }
            if h < best - tol {
                best = h;
                boundary.clear();
            }
            if (h - best).abs() <= tol && !boundary.contains(&class) {
                boundary.push(class);
            }
        }
        for e in 0..ch.len() {
            let (a, b) = (poly[e], poly[(e + 1) % ch.len()]);
            if band_overlap(sign * a.y, sign * b.y, a.dist(b), tol, best) <= tol {
                continue;
            }
            let (other, iso) = surface.across(chart, e);
            let g = iso.inverse().then(&f);
            if seen.insert(key(other.chart, &g)) {
                queue.push_back((other.chart, g));
            }
        }
    }
    boundary.sort_unstable();
    let width = if best < cap { Width::Finite(best) } else { Width::Unbounded };
    Ok((width, if best < cap { boundary } else { Vec::new() }))
}

/// Length of the part of a segment with heights `ya..yb` inside `(tol, top - tol)`.
fn band_overlap(ya: f64, yb: f64, len: f64, tol: f64, top: f64) -> f64 {
    let (lo, hi) = (tol, top - tol);
    if (ya - yb).abs() <= f64::EPSILON * len.max(1.0) {
        return if ya > lo && ya < hi { len } else { 0.0 };
    }
    let t0 = ((lo - ya) / (yb - ya)).clamp(0.0, 1.0);
    let t1 = ((hi - ya) / (yb - ya)).clamp(0.0, 1.0);
    (t1 - t0).abs() * len
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffsetCheck {
    /// Signed offset, positive to the left.
    pub offset: f64,
    pub closed: bool,
    pub circumference: Option<f64>,
    pub matches: bool,
}

/// Re-trace parallel copies of the core at the given fractions of each finite width.
pub fn check_offsets(surface: &ConeSurface, cyl: &Cylinder, fractions: &[f64]) -> Result<Vec<OffsetCheck>, CylinderError> {
    let mut out = Vec::new();
    for (w, sign) in [(cyl.width_left, 1.0), (cyl.width_right, -1.0)] {
        let Width::Finite(w) = w else { continue };
        for &f in fractions {
            let u = sign * f * w;
            let start = offset_state(surface, cyl.core.start, u)?;
            let closed = closed_from(surface, start, 2.0 * cyl.circumference + 1.0)?;
            let circumference = closed.as_ref().and_then(|r| r.period);
            let matches = circumference.is_some_and(|p| (p - cyl.circumference).abs() <= surface.tol.rec);
            out.push(OffsetCheck { offset: u, closed: closed.is_some(), circumference, matches });
        }
    }
    Ok(out)
}

/// A closed curve used to approximate a target geodesic.
#[derive(Debug, Clone, PartialEq)]
pub enum Approximant {
    ClosedGeodesic(TraceResult),
    Chain(PiecewiseGeodesic),
}

impl Approximant {
    pub fn length(&self) -> f64 {
        match self {
            Approximant::ClosedGeodesic(t) => t.period.unwrap_or(t.total_length),
            Approximant::Chain(c) => c.length,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Approximant::ClosedGeodesic(_) => "closed_geodesic",
            Approximant::Chain(c) if c.is_single_loop() => "saddle_loop",
            Approximant::Chain(_) => "closed_chain",
        }
    }
}

impl SurfacePath for Approximant {
    fn position(&self, s: f64) -> Option<(usize, Vec2)> {
        match self {
            Approximant::ClosedGeodesic(t) => t.position(s),
            Approximant::Chain(c) => c.position(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityConfig {
    pub lengths: Vec<f64>,
    pub window: f64,
    pub eta: f64,
    /// Quadrature step for the weighted distance.
    pub step: f64,
    pub max_chain_links: usize,
    pub saddle_budget: usize,
    pub search: SearchBudget,
}

impl DensityConfig {
    pub fn new(lengths: Vec<f64>, window: f64, eta: f64) -> Self {
        DensityConfig {
            lengths,
            window,
            eta,
            step: 1e-2,
            max_chain_links: 2,
            saddle_budget: crate::saddles::DEFAULT_UNFOLDING_BUDGET,
            search: SearchBudget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityStep {
    pub length_bound: f64,
    pub kind: Option<&'static str>,
    pub approximant_length: Option<f64>,
    pub distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub steps: Vec<DensityStep>,
    pub inventory_size: usize,
    pub window: f64,
    pub truncation_bound: f64,
    pub non_increasing: bool,
    pub strictly_decreasing: bool,
    pub final_value: Option<f64>,
    pub eta: f64,
    pub pass: bool,
}

/// Closed geodesics and closed chains of length at most `max_len`, meant to
/// approximate the geodesic through `anchor`.
pub fn approximant_inventory(
    surface: &ConeSurface,
    anchor: GeodesicState,
    max_len: f64,
    cfg: &DensityConfig,
) -> Result<Vec<Approximant>, CylinderError> {
    let saddles = if surface.singular_classes().next().is_some() {
        enumerate_saddles(surface, None, max_len, cfg.saddle_budget)?
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    let mut directions = BTreeMap::new();
    for s in &saddles {
        let d = s.path.segments[0].direction;
        directions.entry((d.angle() * 1e9).round() as i64).or_insert(d);
    }
    let budget = SearchBudget { max_length: max_len + surface.tol.len, ..cfg.search };
    for d in directions.into_values() {
        let seed = ClosedSeed::Direction { chart: anchor.chart, point: anchor.point, direction: d };
        let start = GeodesicState::new(anchor.chart, anchor.point, d);
        // keep the core through the anchor point when possible
        let core = match closed_from(surface, start, budget.max_length)? {
            Some(core) => Some(core),
            None => find_closed_geodesic(surface, seed, budget).ok().map(|c| c.core),
        };
        if let Some(core) = core {
            out.push(Approximant::ClosedGeodesic(core));
        }
    }
    // chains only need to bend at small cone points; elsewhere single loops suffice
    let links = if surface.classify_singularities().small.is_empty() { 1 } else { cfg.max_chain_links };
    for c in closed_chains(surface, &saddles, links, max_len)? {
        out.push(Approximant::Chain(c));
    }
    Ok(out)
}

/// Best anchor on a closed approximant: the sample point nearest the target point.
fn best_anchor(surface: &ConeSurface, table: &DistanceTable, a: &Approximant, p: (usize, Vec2), step: f64) -> f64 {
    if let Approximant::ClosedGeodesic(_) = a {
        return 0.0;
    }
    let n = (a.length() / step).ceil().max(1.0) as usize;
    let cap = f64::INFINITY;
    (0..n)
        .map(|i| i as f64 * a.length() / n as f64)
        .filter_map(|s| a.position(s).map(|q| (s, table.distance(surface, p, q, cap))))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|x| x.0)
        .unwrap_or(0.0)
}

/// For each length bound, the inventory item closest to `target` in the
/// weighted distance centred at arclength `window` of the target.
pub fn density_experiment(
    surface: &ConeSurface,
    target: &TraceResult,
    cfg: &DensityConfig,
) -> Result<DensityReport, CylinderError> {
    if cfg.lengths.is_empty() || cfg.lengths[0] <= 0.0 || cfg.lengths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CylinderError::BadSchedule);
    }
    let (chart, point, direction) = target
        .locate(cfg.window)
        .ok_or(DistanceError::IncomparableTraces { which: 1, at: cfg.window })?;
    let anchor = GeodesicState::new(chart, point, direction);
    let max_len = *cfg.lengths.last().unwrap();
    let inventory = approximant_inventory(surface, anchor, max_len, cfg)?;
    let mut scored = Vec::with_capacity(inventory.len());
    let mut truncation_bound = 0.0;
    let table = DistanceTable::new(surface);
    for a in &inventory {
        let at = best_anchor(surface, &table, a, (chart, point), cfg.step);
        let d = geodesic_distance(surface, target, cfg.window, a, at, cfg.window, cfg.step)?;
        truncation_bound = d.truncation_bound;
        scored.push((a.length(), d.value, a.kind()));
    }
    let steps: Vec<DensityStep> = cfg
        .lengths
        .iter()
        .map(|&l| {
            let best = scored
                .iter()
                .filter(|x| x.0 <= l + surface.tol.len)
                .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
            DensityStep {
                length_bound: l,
                kind: best.map(|b| b.2),
                approximant_length: best.map(|b| b.0),
                distance: best.map(|b| b.1),
            }
        })
        .collect();
    let vals: Vec<f64> = steps.iter().map(|s| s.distance.unwrap_or(f64::INFINITY)).collect();
    let non_increasing = vals.windows(2).all(|w| w[1] <= w[0]);
    let strictly_decreasing = vals.windows(2).all(|w| w[1] < w[0]);
    let final_value = steps.last().and_then(|s| s.distance);
    let pass = non_increasing && final_value.is_some_and(|v| v < cfg.eta);
    Ok(DensityReport {
        steps,
        inventory_size: inventory.len(),
        window: cfg.window,
        truncation_bound,
        non_increasing,
        strictly_decreasing,
        final_value,
        eta: cfg.eta,
        pass,
    })
}
