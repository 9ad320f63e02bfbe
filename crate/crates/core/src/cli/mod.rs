//! Command-line front end. `run` parses arguments, dispatches and returns the exit code.

mod commands;
mod experiment;
mod selftest;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::surface::ConeSurface;
use crate::tolerance::Tolerances;

pub use experiment::{ExperimentConfig, RunReport, Scenario, TargetSpec};
pub use selftest::{random_point, selftest, SelftestReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_EXPERIMENT_FAIL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: &'static str, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Failed(String),
    /// An experiment ran and its verdict was FAIL.
    #[error("experiment verdict: FAIL")]
    ExperimentFail,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::Validation(_) | CliError::Read { .. } => EXIT_VALIDATION,
            CliError::Write { .. } | CliError::Failed(_) => EXIT_FAILURE,
            CliError::ExperimentFail => EXIT_EXPERIMENT_FAIL,
        }
    }
}

pub(crate) fn usage(flag: &'static str, message: impl Into<String>) -> CliError {
    CliError::Usage { flag, message: message.into() }
}

pub(crate) fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

/// Cone surfaces from glued polygons: validation, geodesics, saddle
/// connections, cylinders, branched covers and experiments.
#[derive(Debug, Parser)]
#[command(name = "conesurf", version)]
pub struct Cli {
    /// JSON file overriding numeric tolerances (len, angle, hit, rec, dev)
    #[arg(long, global = true, value_name = "FILE")]
    pub tolerance_overrides: Option<PathBuf>,
    /// Print nothing on success
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Print results as JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a surface file and print its vertex classes and Gauss-Bonnet balance
    Validate(ValidateArgs),
    /// Trace a geodesic from a point and direction
    Trace(TraceArgs),
    /// Enumerate saddle connections up to a length
    Saddles(SaddlesArgs),
    /// Find a closed geodesic and the widths of its cylinder
    Cylinders(CylindersArgs),
    /// Approximate a trace by closed geodesics and closed chains
    Density(DensityArgs),
    /// Build a branched cover from sheet permutations
    Cover(CoverArgs),
    /// Run a configured experiment and write its report
    Experiment(ExperimentArgs),
    /// Seeded randomized self-checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Surface description (JSON)
    #[arg(long, value_name = "FILE")]
    pub surface: PathBuf,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Surface description (JSON)
    #[arg(long, value_name = "FILE")]
    pub surface: PathBuf,
    /// Starting chart id
    #[arg(long, value_name = "ID")]
    pub chart: String,
    /// Starting x coordinate in the chart
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    /// Starting y coordinate in the chart
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
    /// Direction x component
    #[arg(long, allow_negative_numbers = true)]
    pub dx: f64,
    /// Direction y component
    #[arg(long, allow_negative_numbers = true)]
    pub dy: f64,
    /// Arclength to trace
    #[arg(long, value_name = "T")]
    pub max_length: f64,
    /// Stop at the first cone point (default)
    #[arg(long, conflicts_with = "no_stop")]
    pub stop_on_cone: bool,
    /// Continue through cone points that admit a continuation
    #[arg(long)]
    pub no_stop: bool,
    /// Stop when the trace closes up
    #[arg(long)]
    pub detect_recurrence: bool,
    /// Spacing of the distance-to-singularity samples
    #[arg(long, value_name = "S", default_value_t = 0.01)]
    pub sample_step: f64,
    /// Write the developed trajectory as SVG
    #[arg(long, value_name = "OUT.svg")]
    pub svg: Option<PathBuf>,
    /// Write arclength, chart, x, y, m_of_T rows
    #[arg(long, value_name = "OUT.csv")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SaddlesArgs {
    /// Surface description (JSON)
    #[arg(long, value_name = "FILE")]
    pub surface: PathBuf,
    /// Length bound
    #[arg(long, value_name = "L")]
    pub max_length: f64,
    /// Vertex class to start from, or `all`
    #[arg(long, value_name = "CLASS|all", default_value = "all")]
    pub base: String,
    /// Cap on unfolded chart copies
    #[arg(long, value_name = "N", default_value_t = crate::saddles::DEFAULT_UNFOLDING_BUDGET)]
    pub budget: usize,
    /// Write start, end, length, hx, hy rows
    #[arg(long, value_name = "OUT.csv")]
    pub csv: Option<PathBuf>,
    /// Write angle, multiplicity rows of the direction spectrum
    #[arg(long, value_name = "OUT.csv")]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CylindersArgs {
    /// Surface description (JSON)
    #[arg(long, value_name = "FILE")]
    pub surface: PathBuf,
    /// Launch direction `dx,dy`
    #[arg(long, value_name = "DX,DY", allow_hyphen_values = true, required_unless_present = "from_saddle", conflicts_with = "from_saddle")]
    pub direction: Option<String>,
    /// Chart of the launch point (with --direction; default: first chart)
    #[arg(long, value_name = "ID")]
    pub chart: Option<String>,
    /// Launch point `x,y` (with --direction; default: chart centroid)
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Index into the saddle list sorted by length
    #[arg(long, value_name = "IDX")]
    pub from_saddle: Option<usize>,
    /// Length bound of the saddle list used by --from-saddle
    #[arg(long, value_name = "L", default_value_t = 10.0)]
    pub saddle_length: f64,
    /// Longest closed geodesic searched for
    #[arg(long, value_name = "T", default_value_t = 200.0)]
    pub max_length: f64,
    /// Write circumference, widths and boundary classes as JSON
    #[arg(long, value_name = "OUT.json")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Surface description (JSON)
    #[arg(long, value_name = "FILE")]
    pub surface: PathBuf,
    /// Target geodesic: JSON with chart, x, y, dx, dy and optional length
    #[arg(long, value_name = "FILE")]
    pub target_spec: PathBuf,
    /// Strictly increasing length bounds, comma separated
    #[arg(long, value_name = "L1,L2,..")]
    pub lengths: String,
    /// Half-width W of the comparison window
    #[arg(long, value_name = "W")]
    pub window: f64,
    /// Pass threshold on the final distance
    #[arg(long, value_name = "ETA")]
    pub eta: f64,
    /// Write the report as JSON
    #[arg(long, value_name = "OUT.json")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchModeArg {
    Strict,
    Extended,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    /// Surface description (JSON)
    #[arg(long, value_name = "FILE")]
    pub surface: PathBuf,
    /// Cover degree, or `auto` for the smallest suitable odd degree
    #[arg(long, value_name = "d|auto", default_value = "auto")]
    pub degree: String,
    /// Monodromy JSON (gluing index to one-line permutation), or `search`
    #[arg(long, value_name = "FILE|search", default_value = "search")]
    pub monodromy: String,
    /// Which classes the search may branch over
    #[arg(long, value_enum, default_value_t = BranchModeArg::Strict)]
    pub mode: BranchModeArg,
    /// Node budget of the monodromy search
    #[arg(long, value_name = "N", default_value_t = crate::covering::DEFAULT_SEARCH_BUDGET)]
    pub budget: usize,
    /// Write the cover surface description
    #[arg(long, value_name = "COVER.json")]
    pub out: Option<PathBuf>,
    /// Write the branching report
    #[arg(long, value_name = "REPORT.json")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    NoStrips,
    Density,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Which experiment to run
    #[arg(value_enum)]
    pub scenario: ScenarioArg,
    /// Surface description (JSON)
    #[arg(long, value_name = "FILE")]
    pub surface: PathBuf,
    /// Experiment configuration (JSON)
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    /// Report path (default: the config's `report` field, else `<scenario>_report.json`)
    #[arg(long, value_name = "OUT.json")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Random seed
    #[arg(long, default_value_t = 2718)]
    pub seed: u64,
    /// Random cases per check
    #[arg(long, value_name = "N", default_value_t = 200)]
    pub samples: usize,
}

/// Printing policy from the global flags.
pub(crate) struct Out {
    pub quiet: bool,
    pub json: bool,
}

impl Out {
    pub fn emit<T: Serialize>(&self, text: &str, value: &T) {
        if self.quiet {
            return;
        }
        // a closed pipe downstream is not an error worth reporting
        let mut stdout = std::io::stdout().lock();
        let _ = if self.json {
            writeln!(stdout, "{}", serde_json::to_string_pretty(value).expect("report serializes"))
        } else {
            write!(stdout, "{text}")
        };
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    write(path, &s)
}

pub(crate) fn load_surface(path: &Path, tol: Tolerances) -> Result<ConeSurface, CliError> {
    let text = read(path)?;
    ConeSurface::from_json_with(&text, tol).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub(crate) fn parse_pair(flag: &'static str, s: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(usage(flag, format!("expected two numbers, got '{s}'"))),
        },
        _ => Err(usage(flag, format!("expected `a,b`, got '{s}'"))),
    }
}

pub(crate) fn parse_list(flag: &'static str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(flag, format!("'{x}' is not a number"))))
        .collect()
}

/// Parse `args` (program name first) and run. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if !matches!(e, CliError::ExperimentFail) || !cli.quiet {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let tol = match &cli.tolerance_overrides {
        Some(p) => Tolerances::from_json(&read(p)?).map_err(|e| usage("--tolerance-overrides", e.to_string()))?,
        None => Tolerances::default(),
    };
    let out = Out { quiet: cli.quiet, json: cli.json };
    match &cli.command {
        Command::Validate(a) => commands::validate(a, tol, &out),
        Command::Trace(a) => commands::trace(a, tol, &out),
        Command::Saddles(a) => commands::saddles(a, tol, &out),
        Command::Cylinders(a) => commands::cylinders(a, tol, &out),
        Command::Density(a) => commands::density(a, tol, &out),
        Command::Cover(a) => commands::cover(a, tol, &out),
        Command::Experiment(a) => experiment::run_experiment(a, tol, &out),
        Command::Selftest(a) => selftest::run_selftest(a, &out),
    }
}
