use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cylinders::{density_experiment, DensityConfig};
use crate::tolerance::Tolerances;
use crate::tracer::{min_distance_experiment, GeodesicState};

use super::commands::{chart_by_id, trace_target};
use super::{failed, load_surface, read, usage, write_json, CliError, ExperimentArgs, Out, ScenarioArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    NoStrips,
    Density,
}

/// Starting point and direction of a target geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub chart: String,
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
    /// Traced length; defaults to what the experiment needs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
}

/// Experiment configuration file.
///
/// ```json
/// { "scenario": "no-strips", "target": {"chart": "oct", "x": 0.05, "y": -0.1, "dx": 1, "dy": 0.7},
///   "lengths": [100, 200, 500], "eta": 0.05 }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    pub target: TargetSpec,
    /// Trace lengths (no-strips) or approximant length bounds (density).
    pub lengths: Vec<f64>,
    pub eta: f64,
    /// Half-width of the comparison window; density only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// Used instead of the global tolerances when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

impl ExperimentConfig {
    pub fn check(&self, scenario: Scenario) -> Result<(), CliError> {
        if self.scenario.is_some_and(|s| s != scenario) {
            return Err(usage("--config", "scenario in the file does not match the command line"));
        }
        if self.lengths.is_empty() || self.lengths[0] <= 0.0 || self.lengths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(usage("--config", "lengths must be positive and strictly increasing"));
        }
        if !(self.eta > 0.0) {
            return Err(usage("--config", "eta must be positive"));
        }
        match (scenario, self.window) {
            (Scenario::Density, None) => Err(usage("--config", "density needs a window")),
            (_, Some(w)) if !(w > 0.0) => Err(usage("--config", "window must be positive")),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub surface: String,
    pub config: ExperimentConfig,
    pub metrics: serde_json::Value,
    pub verdict: &'static str,
    /// Left out of the written file so reports are reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

pub fn run_experiment(a: &ExperimentArgs, tol: Tolerances, out: &Out) -> Result<(), CliError> {
    let clock = Instant::now();
    let scenario = match a.scenario {
        ScenarioArg::NoStrips => Scenario::NoStrips,
        ScenarioArg::Density => Scenario::Density,
    };
    let cfg: ExperimentConfig = serde_json::from_str(&read(&a.config)?).map_err(|e| usage("--config", e.to_string()))?;
    cfg.check(scenario)?;
    let s = load_surface(&a.surface, cfg.tolerances.unwrap_or(tol))?;
    let mut text = String::new();
    let (metrics, pass) = match scenario {
        Scenario::NoStrips => {
            let chart = chart_by_id(&s, "target chart", &cfg.target.chart)?;
            let t = &cfg.target;
            let start = GeodesicState::new(chart, crate::Vec2::new(t.x, t.y), crate::Vec2::new(t.dx, t.dy));
            let r = min_distance_experiment(&s, start, &cfg.lengths, cfg.eta).map_err(|e| CliError::Validation(e.to_string()))?;
            for (t, m) in &r.series {
                let _ = writeln!(text, "m({t}) = {m:.9}");
            }
            if let Some(at) = r.stopped_at {
                let _ = writeln!(text, "trace stopped at a cone point at arclength {at}");
            }
            let pass = r.non_increasing && r.below_threshold;
            (serde_json::to_value(&r).expect("report serializes"), pass)
        }
        Scenario::Density => {
            let w = cfg.window.expect("checked");
            let target = trace_target(&s, &cfg.target, 2.0 * w)?;
            let dc = DensityConfig::new(cfg.lengths.clone(), w, cfg.eta);
            let r = density_experiment(&s, &target, &dc).map_err(failed)?;
            for st in &r.steps {
                let d = st.distance.map(|d| format!("{d:.9}")).unwrap_or_else(|| "none".into());
                let _ = writeln!(text, "L {}  distance {}  ({})", st.length_bound, d, st.kind.unwrap_or("no approximant"));
            }
            if !r.strictly_decreasing {
                let _ = writeln!(text, "note: sequence is not strictly decreasing");
            }
            (json!(r), r.pass)
        }
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut report = RunReport {
        scenario,
        surface: a.surface.display().to_string(),
        config: cfg.clone(),
        metrics,
        verdict,
        wall_clock_s: None,
    };
    let path = a
        .report
        .clone()
        .or(cfg.report.clone())
        .unwrap_or_else(|| PathBuf::from(match scenario {
            Scenario::NoStrips => "no-strips_report.json",
            Scenario::Density => "density_report.json",
        }));
    write_json(&path, &report)?;
    report.wall_clock_s = Some(clock.elapsed().as_secs_f64());
    let _ = writeln!(text, "{verdict}  ({:.2} s, report {})", report.wall_clock_s.unwrap_or(0.0), path.display());
    out.emit(&text, &report);
    if pass {
        Ok(())
    } else {
        Err(CliError::ExperimentFail)
    }
}
