use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::covering::{build_cover, default_odd_degree, riemann_hurwitz_check, search_monodromy, BranchMode, CoverSpec};
use crate::cylinders::{density_experiment, find_closed_geodesic, ClosedSeed, Cylinder, DensityConfig, SearchBudget};
use crate::geom::Vec2;
use crate::saddles::{enumerate_saddles, spectrum_of};
use crate::surface::ConeSurface;
use crate::svg::developed_svg;
use crate::tolerance::Tolerances;
use crate::tracer::{self, GeodesicState, TraceOptions, TraceResult};

use super::experiment::TargetSpec;
use super::{
    failed, load_surface, parse_list, parse_pair, read, usage, write, write_json, BranchModeArg, CliError, CoverArgs,
    CylindersArgs, DensityArgs, Out, SaddlesArgs, TraceArgs, ValidateArgs,
};

fn fmt_f(x: f64) -> String {
    if x.is_finite() { format!("{x}") } else { "inf".into() }
}

pub(crate) fn chart_by_id(s: &ConeSurface, flag: &'static str, id: &str) -> Result<usize, CliError> {
    s.chart_index(id).ok_or_else(|| usage(flag, format!("no chart with id '{id}'")))
}

pub fn validate(a: &ValidateArgs, tol: Tolerances, out: &Out) -> Result<(), CliError> {
    let s = load_surface(&a.surface, tol)?;
    let gb = s.validate_gauss_bonnet();
    let mut text = format!(
        "charts {}  gluings {}  vertex classes {}  euler characteristic {}\n",
        s.charts.len(),
        s.gluings.len(),
        s.vertex_classes.len(),
        s.euler_characteristic
    );
    for c in &s.vertex_classes {
        let _ = writeln!(
            text,
            "  class {:>2}  angle {:.6} pi  {:?}{}  corners {}",
            c.id,
            c.angle / std::f64::consts::PI,
            c.kind,
            if c.singular { "" } else { " (regular)" },
            c.corners.len()
        );
    }
    let _ = writeln!(text, "gauss-bonnet: lhs {} rhs {} residual {:.3e} {}", gb.lhs, gb.rhs, gb.residual, if gb.ok { "ok" } else { "FAILED" });
    let classes: Vec<_> = s
        .vertex_classes
        .iter()
        .map(|c| json!({"id": c.id, "angle": c.angle, "kind": c.kind, "singular": c.singular, "corners": c.corners.len()}))
        .collect();
    out.emit(
        &text,
        &json!({
            "charts": s.charts.len(),
            "gluings": s.gluings.len(),
            "euler_characteristic": s.euler_characteristic,
            "vertex_classes": classes,
            "gauss_bonnet": gb,
        }),
    );
    if gb.ok {
        Ok(())
    } else {
        Err(CliError::Validation(format!("Gauss-Bonnet residual {} exceeds tolerance", gb.residual)))
    }
}

fn trace_csv(s: &ConeSurface, r: &TraceResult) -> String {
    let mut csv = String::from("arclength,chart,x,y,m_of_T\n");
    let mut row = |t: f64, chart: usize, p: Vec2| {
        let _ = writeln!(csv, "{},{},{},{},{}", t, s.charts[chart].id, p.x, p.y, fmt_f(r.min_distance_at(t)));
    };
    let series = &r.min_distance_series;
    let mut k = 0;
    for seg in &r.segments {
        row(seg.start_arclength, seg.chart, seg.start);
        while k < series.len() && series[k].0 <= seg.start_arclength {
            k += 1;
        }
        // samples strictly inside the segment
        while k < series.len() && series[k].0 < seg.end_arclength() {
            let t = series[k].0;
            row(t, seg.chart, seg.start + seg.direction * (t - seg.start_arclength));
            k += 1;
        }
    }
    if let Some(seg) = r.segments.last() {
        row(seg.end_arclength(), seg.chart, seg.end);
    }
    csv
}

pub fn trace(a: &TraceArgs, tol: Tolerances, out: &Out) -> Result<(), CliError> {
    let s = load_surface(&a.surface, tol)?;
    let chart = chart_by_id(&s, "--chart", &a.chart)?;
    if !(a.max_length > 0.0) {
        return Err(usage("--max-length", "must be positive"));
    }
    if !(a.sample_step > 0.0) {
        return Err(usage("--sample-step", "must be positive"));
    }
    let opts = TraceOptions::new(a.max_length)
        .stop_on_cone(!a.no_stop)
        .detect_recurrence(a.detect_recurrence)
        .sample_step(Some(a.sample_step));
    let start = GeodesicState::new(chart, Vec2::new(a.x, a.y), Vec2::new(a.dx, a.dy));
    let r = tracer::trace(&s, start, opts).map_err(|e| CliError::Validation(e.to_string()))?;
    if let Some(p) = &a.csv {
        write(p, &trace_csv(&s, &r))?;
    }
    if let Some(p) = &a.svg {
        write(p, &developed_svg(&s, &r))?;
    }
    let end = r.end_state();
    let last = r.events.last().map(|e| e.name()).unwrap_or("none");
    let crossings = r.events.iter().filter(|e| e.name() == "EdgeCross").count();
    let text = format!(
        "length {}  segments {}  edge crossings {}  stop {}\nend chart {} point ({}, {})\nmin distance to singular set {}\n{}",
        r.total_length,
        r.segments.len(),
        crossings,
        last,
        s.charts[end.chart].id,
        end.point.x,
        end.point.y,
        fmt_f(r.final_min_distance()),
        r.period.map(|p| format!("closed, period {p}\n")).unwrap_or_default()
    );
    out.emit(
        &text,
        &json!({
            "total_length": r.total_length,
            "segments": r.segments.len(),
            "events": r.events,
            "end": {"chart": s.charts[end.chart].id, "x": end.point.x, "y": end.point.y, "dx": end.direction.x, "dy": end.direction.y},
            "min_distance": r.final_min_distance().is_finite().then(|| r.final_min_distance()),
            "period": r.period,
        }),
    );
    Ok(())
}

pub fn saddles(a: &SaddlesArgs, tol: Tolerances, out: &Out) -> Result<(), CliError> {
    let s = load_surface(&a.surface, tol)?;
    let base = match a.base.as_str() {
        "all" => None,
        b => Some(b.parse::<usize>().map_err(|_| usage("--base", format!("expected a class index or `all`, got '{b}'")))?),
    };
    if !(a.max_length > 0.0) {
        return Err(usage("--max-length", "must be positive"));
    }
    let list = enumerate_saddles(&s, base, a.max_length, a.budget).map_err(failed)?;
    if let Some(p) = &a.csv {
        let mut csv = String::from("start,end,length,hx,hy\n");
        for c in &list {
            let _ = writeln!(csv, "{},{},{},{},{}", c.start, c.end, c.length, c.holonomy.x, c.holonomy.y);
        }
        write(p, &csv)?;
    }
    let spectrum = spectrum_of(&list);
    if let Some(p) = &a.spectrum {
        let mut csv = String::from("angle,multiplicity\n");
        for (angle, m) in &spectrum.directions {
            let _ = writeln!(csv, "{angle},{m}");
        }
        write(p, &csv)?;
    }
    let mut text = format!("{} saddle connections of length <= {}\n", list.len(), a.max_length);
    for c in list.iter().take(10) {
        let _ = writeln!(text, "  {} -> {}  length {:.9}  holonomy ({:.9}, {:.9})", c.start, c.end, c.length, c.holonomy.x, c.holonomy.y);
    }
    if list.len() > 10 {
        let _ = writeln!(text, "  ...");
    }
    let _ = writeln!(text, "{} directions, largest gap {:.6} rad", spectrum.directions.len(), spectrum.max_gap);
    let rows: Vec<_> = list
        .iter()
        .map(|c| json!({"start": c.start, "end": c.end, "length": c.length, "hx": c.holonomy.x, "hy": c.holonomy.y}))
        .collect();
    out.emit(&text, &json!({"count": list.len(), "saddles": rows, "directions": spectrum.directions.len(), "max_gap": spectrum.max_gap}));
    Ok(())
}

#[derive(Serialize)]
struct CylinderReport<'a> {
    circumference: f64,
    #[serde(rename = "d_L")]
    d_l: crate::cylinders::Width,
    #[serde(rename = "d_R")]
    d_r: crate::cylinders::Width,
    boundary_left: &'a [usize],
    boundary_right: &'a [usize],
    sides: &'static str,
    core: serde_json::Value,
}

fn cylinder_report<'a>(s: &ConeSurface, c: &'a Cylinder) -> CylinderReport<'a> {
    let st = c.core.start;
    CylinderReport {
        circumference: c.circumference,
        d_l: c.width_left,
        d_r: c.width_right,
        boundary_left: &c.boundary_left,
        boundary_right: &c.boundary_right,
        sides: "left is counterclockwise from the core direction",
        core: json!({"chart": s.charts[st.chart].id, "x": st.point.x, "y": st.point.y, "dx": st.direction.x, "dy": st.direction.y}),
    }
}

pub fn cylinders(a: &CylindersArgs, tol: Tolerances, out: &Out) -> Result<(), CliError> {
    let s = load_surface(&a.surface, tol)?;
    let budget = SearchBudget { max_length: a.max_length, ..Default::default() };
    let saddles;
    let seed = if let Some(idx) = a.from_saddle {
        saddles = enumerate_saddles(&s, None, a.saddle_length, crate::saddles::DEFAULT_UNFOLDING_BUDGET).map_err(failed)?;
        let sc = saddles
            .get(idx)
            .ok_or_else(|| usage("--from-saddle", format!("only {} saddle connections of length <= {}", saddles.len(), a.saddle_length)))?;
        ClosedSeed::Saddle(sc)
    } else {
        let (dx, dy) = parse_pair("--direction", a.direction.as_deref().unwrap_or_default())?;
        let chart = match &a.chart {
            Some(id) => chart_by_id(&s, "--chart", id)?,
            None => 0,
        };
        let point = match &a.point {
            Some(p) => {
                let (x, y) = parse_pair("--point", p)?;
                Vec2::new(x, y)
            }
            None => {
                let v = &s.charts[chart].vertices;
                v.iter().fold(Vec2::ZERO, |acc, &p| acc + p) * (1.0 / v.len() as f64)
            }
        };
        ClosedSeed::Direction { chart, point, direction: Vec2::new(dx, dy) }
    };
    let c = find_closed_geodesic(&s, seed, budget).map_err(failed)?;
    let report = cylinder_report(&s, &c);
    if let Some(p) = &a.report {
        write_json(p, &report)?;
    }
    let w = |x: crate::cylinders::Width| x.value().map(|v| v.to_string()).unwrap_or_else(|| "unbounded".into());
    let text = format!(
        "circumference {}\nd_L {}  boundary classes {:?}\nd_R {}  boundary classes {:?}\n",
        c.circumference,
        w(c.width_left),
        c.boundary_left,
        w(c.width_right),
        c.boundary_right
    );
    out.emit(&text, &report);
    Ok(())
}

pub(crate) fn trace_target(s: &ConeSurface, t: &TargetSpec, min_length: f64) -> Result<TraceResult, CliError> {
    let chart = chart_by_id(s, "target chart", &t.chart)?;
    let length = t.length.unwrap_or(min_length + 1.0);
    if length < min_length {
        return Err(usage("target length", format!("{length} is shorter than the comparison window needs ({min_length})")));
    }
    tracer::trace(s, GeodesicState::new(chart, Vec2::new(t.x, t.y), Vec2::new(t.dx, t.dy)), TraceOptions::new(length))
        .map_err(|e| CliError::Validation(e.to_string()))
}

pub fn density(a: &DensityArgs, tol: Tolerances, out: &Out) -> Result<(), CliError> {
    let s = load_surface(&a.surface, tol)?;
    let spec: TargetSpec =
        serde_json::from_str(&read(&a.target_spec)?).map_err(|e| usage("--target-spec", e.to_string()))?;
    let lengths = parse_list("--lengths", &a.lengths)?;
    if lengths.is_empty() || lengths[0] <= 0.0 || lengths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(usage("--lengths", "must be positive and strictly increasing"));
    }
    if !(a.window > 0.0) {
        return Err(usage("--window", "must be positive"));
    }
    if !(a.eta > 0.0) {
        return Err(usage("--eta", "must be positive"));
    }
    let target = trace_target(&s, &spec, 2.0 * a.window)?;
    let r = density_experiment(&s, &target, &DensityConfig::new(lengths, a.window, a.eta)).map_err(failed)?;
    if let Some(p) = &a.report {
        write_json(p, &r)?;
    }
    let mut text = String::new();
    for st in &r.steps {
        let _ = writeln!(
            text,
            "L {:>10.6}  {}",
            st.length_bound,
            match (st.kind, st.distance) {
                (Some(k), Some(d)) => format!("{k} of length {:.6}  distance {d:.9}", st.approximant_length.unwrap_or(0.0)),
                _ => "no approximant".into(),
            }
        );
    }
    let _ = writeln!(text, "{}", if r.pass { "PASS" } else { "FAIL" });
    out.emit(&text, &r);
    if r.pass {
        Ok(())
    } else {
        Err(CliError::ExperimentFail)
    }
}

pub fn cover(a: &CoverArgs, tol: Tolerances, out: &Out) -> Result<(), CliError> {
    let s = load_surface(&a.surface, tol)?;
    let degree = match a.degree.as_str() {
        "auto" => None,
        d => Some(d.parse::<usize>().ok().filter(|&d| d > 0).ok_or_else(|| usage("--degree", format!("expected a positive integer or `auto`, got '{d}'")))?),
    };
    let spec = if a.monodromy == "search" {
        let d = match degree {
            Some(d) => d,
            None => default_odd_degree(&s).map_err(|e| CliError::Validation(e.to_string()))?,
        };
        let mode = match a.mode {
            BranchModeArg::Strict => BranchMode::Strict,
            BranchModeArg::Extended => BranchMode::Extended,
        };
        search_monodromy(&s, d, mode, a.budget).map_err(failed)?
    } else {
        let text = read(std::path::Path::new(&a.monodromy))?;
        CoverSpec::from_json(&text, degree).map_err(|e| usage("--monodromy", e.to_string()))?
    };
    let cover = build_cover(&s, &spec).map_err(|e| CliError::Validation(e.to_string()))?;
    let residual = riemann_hurwitz_check(&cover.report);
    if let Some(p) = &a.out {
        write(p, &(cover.surface.to_description().to_json() + "\n"))?;
    }
    let monodromy: std::collections::BTreeMap<String, Vec<usize>> =
        spec.edge_permutations.iter().map(|(g, p)| (g.to_string(), p.one_line())).collect();
    let report = json!({
        "degree": spec.degree,
        "monodromy": monodromy,
        "branching": cover.report,
        "riemann_hurwitz_residual": residual,
    });
    if let Some(p) = &a.report {
        write_json(p, &report)?;
    }
    if !cover.report.connected && !out.quiet {
        eprintln!("warning: cover has {} components; kept the one containing sheet 1", cover.report.components);
    }
    let mut text = format!(
        "degree {}  components {}  euler characteristic {}  riemann-hurwitz residual {}\n",
        spec.degree, cover.report.components, cover.report.euler_characteristic, residual
    );
    for b in &cover.report.base {
        let _ = writeln!(text, "  base class {:>2}  angle {:.6} pi  monodromy {:?}  cycle type {:?}", b.class, b.angle / std::f64::consts::PI, b.monodromy, b.cycle_type);
    }
    for c in &cover.report.cover {
        let _ = writeln!(text, "  cover class {:>2}  over {}  local degree {}  angle {:.6} pi", c.class, c.base_class, c.local_degree, c.angle / std::f64::consts::PI);
    }
    out.emit(&text, &report);
    Ok(())
}
