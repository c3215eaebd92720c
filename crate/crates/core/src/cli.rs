//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid configuration or arguments, 3 file I/O
//! failure, 4 internal inconsistency (analytic and integrator disagree, or a
//! numerical kernel fails).
//!
//! Scenario files are flat `key = value` text; `#` starts a comment. Keys:
//! `model`, `gamma`, `alphas` (comma separated), `t_max`, `steps`,
//! `initial_state` (`plus`, `excited` or `custom(r00, r01, r10, r11)` with
//! complex entries such as `0.5-0.5i`), `method`, `out`, `svg`. Flags given
//! on the command line override the file.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::analytic::{ad_density, matrix_ml, AmplitudeDampingParams};
use crate::fde_solver::{convergence_study, solve, CaputoProblem, ConvergenceTable};
use crate::mlf::{ml_two, MlError};
use crate::plot::{heat_map, line_plot, Axes, Series};
use crate::quantum_ops::{
    choi_matrix, l1_coherence, lindblad_superoperator, min_hermitian_eigenvalue, DensityMatrix, LindbladModel,
    MapMatrix,
};

/// Largest tolerated analytic/integrator disagreement in C_ℓ1 for `--method both`.
pub const DISCREPANCY_LIMIT: f64 = 1e-2;
/// Smallest accepted Choi eigenvalue in the CP audit.
pub const CHOI_FLOOR: f64 = -1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: &str, message: impl Into<String>) -> Self {
        Self { field: field.to_string(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("cannot {action} {}: {source}", path.display())]
    Io { action: &'static str, path: PathBuf, source: std::io::Error },
    #[error("analytic and integrator C_l1 differ by {0:.3e} (limit {DISCREPANCY_LIMIT:e})")]
    Discrepancy(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Discrepancy(_) | CliError::Numerical(_) => 4,
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Io { action: "write to", path: PathBuf::from("<stdout>"), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    AmplitudeDamping,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Plus,
    Excited,
    /// Row-major entries ρ₀₀, ρ₀₁, ρ₁₀, ρ₁₁ (index 0 is the ground state).
    Custom([Complex64; 4]),
}

impl InitialState {
    pub fn density(&self) -> Result<DensityMatrix, ConfigError> {
        match self {
            InitialState::Plus => Ok(DensityMatrix::plus()),
            InitialState::Excited => Ok(DensityMatrix::basis(2, 1)),
            InitialState::Custom(e) => DensityMatrix::new(DMatrix::from_row_slice(2, 2, e))
                .map_err(|err| ConfigError::new("initial_state", err.to_string())),
        }
    }
}

impl FromStr for InitialState {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let s = s.trim();
        match s {
            "plus" => return Ok(InitialState::Plus),
            "excited" => return Ok(InitialState::Excited),
            _ => {}
        }
        let body = s.strip_prefix("custom(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| {
            ConfigError::new("initial_state", format!("expected plus, excited or custom(...), got `{s}`"))
        })?;
        let entries: Vec<Complex64> = body
            .split(',')
            .map(|p| {
                let p: String = p.chars().filter(|c| !c.is_whitespace()).collect();
                Complex64::from_str(&p)
                    .map_err(|_| ConfigError::new("initial_state", format!("bad complex entry `{p}`")))
            })
            .collect::<Result<_, _>>()?;
        let entries: [Complex64; 4] = entries
            .try_into()
            .map_err(|_| ConfigError::new("initial_state", "custom state needs exactly 4 entries"))?;
        Ok(InitialState::Custom(entries))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Analytic,
    Integrator,
    Both,
}

/// Which computation produced a row of output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Analytic,
    Integrator,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::Integrator => "integrator",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: Model,
    pub gamma: f64,
    pub alphas: Vec<f64>,
    pub t_max: f64,
    pub steps: usize,
    pub initial_state: InitialState,
    pub method: Method,
    pub output_path: PathBuf,
    pub emit_svg: bool,
}

impl Default for ScenarioConfig {
    /// γ = 1 and the |+⟩ state give the largest initial coherence.
    fn default() -> Self {
        Self {
            model: Model::AmplitudeDamping,
            gamma: 1.0,
            alphas: vec![0.5, 0.7, 0.9, 1.0],
            t_max: 10.0,
            steps: 1000,
            initial_state: InitialState::Plus,
            method: Method::Analytic,
            output_path: PathBuf::from("curves.csv"),
            emit_svg: false,
        }
    }
}

fn parse_value<T: FromStr>(field: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::new(field, format!("cannot parse `{}`", value.trim())))
}

impl ScenarioConfig {
    /// Parses a scenario file on top of the defaults and validates it.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        config.apply_text(text)?;
        config.validated()
    }

    /// Overwrites the fields named in `key = value` lines.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new("config", format!("line {}: expected `key = value`", number + 1)))?;
            let value = value.trim();
            match key.trim() {
                "model" => {
                    self.model = match value {
                        "amplitude_damping" => Model::AmplitudeDamping,
                        other => return Err(ConfigError::new("model", format!("unknown model `{other}`"))),
                    }
                }
                "gamma" => self.gamma = parse_value("gamma", value)?,
                "alphas" | "alpha" => {
                    self.alphas = value.split(',').map(|a| parse_value("alphas", a)).collect::<Result<_, _>>()?
                }
                "t_max" => self.t_max = parse_value("t_max", value)?,
                "steps" => self.steps = parse_value("steps", value)?,
                "initial_state" | "initial" => self.initial_state = value.parse()?,
                "method" => {
                    self.method = Method::from_str(value, false)
                        .map_err(|_| ConfigError::new("method", format!("unknown method `{value}`")))?
                }
                "out" | "output_path" => self.output_path = PathBuf::from(value),
                "svg" | "emit_svg" => self.emit_svg = parse_value("svg", value)?,
                other => return Err(ConfigError::new(other, "unknown key")),
            }
        }
        Ok(())
    }

    /// Checks every numeric constraint; sorts and deduplicates the alphas.
    pub fn validated(mut self) -> Result<Self, ConfigError> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(ConfigError::new("gamma", format!("{} must be positive and finite", self.gamma)));
        }
        if self.alphas.is_empty() {
            return Err(ConfigError::new("alphas", "at least one order is required"));
        }
        if let Some(a) = self.alphas.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
            return Err(ConfigError::new("alphas", format!("{a} is outside (0, 1]")));
        }
        self.alphas.sort_by(f64::total_cmp);
        self.alphas.dedup();
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(ConfigError::new("t_max", format!("{} must be positive and finite", self.t_max)));
        }
        if self.steps == 0 {
            return Err(ConfigError::new("steps", "must be a positive integer"));
        }
        self.initial_state.density()?;
        Ok(self)
    }

    fn params(&self, alpha: f64) -> Result<AmplitudeDampingParams, CliError> {
        AmplitudeDampingParams::new(self.gamma, alpha).map_err(numerical)
    }

    fn generator(&self) -> MapMatrix {
        match self.model {
            Model::AmplitudeDamping => lindblad_superoperator(&LindbladModel::amplitude_damping(self.gamma)),
        }
    }

    fn rho0(&self) -> DensityMatrix {
        self.initial_state.density().expect("validated initial state")
    }
}

/// Fixed 16-significant-digit scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.15e}")
}

/// N + 1 uniform samples of [0, t_max], the last one exactly t_max.
fn step_grid(t_max: f64, steps: usize) -> Vec<f64> {
    let h = t_max / steps as f64;
    (0..=steps).map(|n| if n == steps { t_max } else { n as f64 * h }).collect()
}

/// `count` samples of [a, b] including both ends.
fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![b];
    }
    let h = (b - a) / (count - 1) as f64;
    (0..count).map(|k| if k == count - 1 { b } else { a + k as f64 * h }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub t: f64,
    pub alpha: f64,
    pub c_l1: f64,
    pub rho11: f64,
    pub trace_defect: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curves {
    /// Ordered by α, then source (analytic first), then t.
    pub rows: Vec<CurveRow>,
    /// max |C_ℓ1(analytic) − C_ℓ1(integrator)| when both were computed.
    pub discrepancy: Option<f64>,
}

fn analytic_rows(config: &ScenarioConfig, alpha: f64) -> Result<Vec<CurveRow>, CliError> {
    let params = config.params(alpha)?;
    let rho0 = config.rho0();
    step_grid(config.t_max, config.steps)
        .into_iter()
        .map(|t| {
            let rho = ad_density(&rho0, params, t).map_err(numerical)?;
            Ok(CurveRow {
                t,
                alpha,
                c_l1: l1_coherence(&rho),
                rho11: rho.get(1, 1).re,
                trace_defect: (rho.trace() - 1.0).norm(),
                source: Source::Analytic,
            })
        })
        .collect()
}

fn integrator_rows(config: &ScenarioConfig, alpha: f64) -> Result<Vec<CurveRow>, CliError> {
    let problem =
        CaputoProblem::new(alpha, config.generator(), &config.rho0(), config.t_max, config.steps).map_err(numerical)?;
    let traj = solve(&problem).map_err(numerical)?;
    let (c, r, d) = (traj.series("c_l1"), traj.series("rho11"), traj.series("trace_defect"));
    let (c, r, d) = (c.expect("c_l1 series"), r.expect("rho11 series"), d.expect("trace_defect series"));
    Ok(traj
        .times()
        .iter()
        .enumerate()
        .map(|(k, &t)| CurveRow { t, alpha, c_l1: c[k], rho11: r[k], trace_defect: d[k], source: Source::Integrator })
        .collect())
}

/// C_ℓ1(t), ρ₁₁(t) and the trace defect on the step grid for every α.
pub fn coherence_curves(config: &ScenarioConfig) -> Result<Curves, CliError> {
    let slices: Vec<(Vec<CurveRow>, Option<f64>)> = config
        .alphas
        .par_iter()
        .map(|&alpha| {
            let analytic = match config.method {
                Method::Analytic | Method::Both => Some(analytic_rows(config, alpha)?),
                Method::Integrator => None,
            };
            let integrator = match config.method {
                Method::Integrator | Method::Both => Some(integrator_rows(config, alpha)?),
                Method::Analytic => None,
            };
            let gap = match (&analytic, &integrator) {
                (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| (x.c_l1 - y.c_l1).abs()).fold(0.0, f64::max)),
                _ => None,
            };
            let rows = analytic.into_iter().chain(integrator).flatten().collect();
            Ok((rows, gap))
        })
        .collect::<Result<_, CliError>>()?;
    let discrepancy = slices.iter().filter_map(|s| s.1).reduce(f64::max);
    let rows = slices.into_iter().flat_map(|s| s.0).collect();
    Ok(Curves { rows, discrepancy })
}

pub fn curves_csv(rows: &[CurveRow]) -> String {
    let mut csv = String::from("t,alpha,c_l1,rho11,trace_defect,method\n");
    for r in rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            sci(r.t),
            sci(r.alpha),
            sci(r.c_l1),
            sci(r.rho11),
            sci(r.trace_defect),
            r.source.as_str()
        );
    }
    csv
}

fn alpha_label(alpha: f64) -> String {
    let s = format!("{alpha:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn curves_svg(config: &ScenarioConfig, curves: &Curves) -> String {
    let mut series: Vec<Series> = Vec::new();
    for (k, &alpha) in config.alphas.iter().enumerate() {
        for source in [Source::Analytic, Source::Integrator] {
            let points: Vec<(f64, f64)> =
                curves.rows.iter().filter(|r| r.alpha == alpha && r.source == source).map(|r| (r.t, r.c_l1)).collect();
            if points.is_empty() {
                continue;
            }
            let label = match config.method {
                Method::Both => format!("α = {} ({})", alpha_label(alpha), source.as_str()),
                _ => format!("α = {}", alpha_label(alpha)),
            };
            series.push(Series { label, points, color: k, dashed: source == Source::Integrator });
        }
    }
    line_plot(
        &series,
        &Axes { title: "Coherence decay under fractional amplitude damping", x_label: "t", y_label: "C_l1(t)" },
    )
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { action: "write", path: path.to_path_buf(), source })
}

fn svg_path(path: &Path) -> PathBuf {
    path.with_extension("svg")
}

/// Writes the curves CSV (and SVG), reporting to `out`.
pub fn run_coherence_curves(config: &ScenarioConfig, out: &mut dyn Write) -> Result<Curves, CliError> {
    let curves = coherence_curves(config)?;
    write_file(&config.output_path, &curves_csv(&curves.rows))?;
    writeln!(out, "wrote {} rows to {}", curves.rows.len(), config.output_path.display()).map_err(stdout_error)?;
    if config.emit_svg {
        let path = svg_path(&config.output_path);
        write_file(&path, &curves_svg(config, &curves))?;
        writeln!(out, "wrote {}", path.display()).map_err(stdout_error)?;
    }
    if let Some(gap) = curves.discrepancy {
        writeln!(out, "max c_l1 discrepancy (analytic vs integrator): {gap:.3e}").map_err(stdout_error)?;
        if !(gap <= DISCREPANCY_LIMIT) {
            return Err(CliError::Discrepancy(gap));
        }
    }
    Ok(curves)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    pub times: Vec<f64>,
    pub alphas: Vec<f64>,
    /// `c_l1[i][j]` at (alphas[i], times[j]).
    pub c_l1: Vec<Vec<f64>>,
}

/// Closed-form C_ℓ1 over `steps` times in [0, t_max] and `alpha_count`
/// orders spaced linearly in [min α, 1].
pub fn coherence_landscape(config: &ScenarioConfig, alpha_count: usize) -> Result<Landscape, CliError> {
    if alpha_count < 2 {
        return Err(ConfigError::new("alpha_count", "must be at least 2").into());
    }
    if config.method != Method::Analytic {
        return Err(ConfigError::new("method", "the landscape is computed from closed forms; use analytic").into());
    }
    if config.steps < 2 {
        return Err(ConfigError::new("steps", "the landscape needs at least 2 time samples").into());
    }
    let alpha_min = config.alphas[0];
    if alpha_min >= 1.0 {
        return Err(ConfigError::new("alphas", "the landscape needs a smallest order below 1").into());
    }
    let times = linspace(0.0, config.t_max, config.steps);
    let alphas = linspace(alpha_min, 1.0, alpha_count);
    let rho0 = config.rho0();
    let c_l1 = alphas
        .par_iter()
        .map(|&alpha| {
            let params = config.params(alpha)?;
            times
                .iter()
                .map(|&t| ad_density(&rho0, params, t).map(|rho| l1_coherence(&rho)).map_err(numerical))
                .collect::<Result<Vec<f64>, CliError>>()
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Landscape { times, alphas, c_l1 })
}

pub fn landscape_csv(landscape: &Landscape) -> String {
    let mut csv = String::from("t,alpha,c_l1\n");
    for (alpha, row) in landscape.alphas.iter().zip(&landscape.c_l1) {
        for (t, c) in landscape.times.iter().zip(row) {
            let _ = writeln!(csv, "{},{},{}", sci(*t), sci(*alpha), sci(*c));
        }
    }
    csv
}

pub fn landscape_svg(landscape: &Landscape) -> String {
    heat_map(
        &landscape.times,
        &landscape.alphas,
        &landscape.c_l1,
        &Axes { title: "Coherence over time and fractional order", x_label: "t", y_label: "α" },
        "C_l1",
    )
}

pub fn run_coherence_landscape(
    config: &ScenarioConfig,
    alpha_count: usize,
    out: &mut dyn Write,
) -> Result<Landscape, CliError> {
    let landscape = coherence_landscape(config, alpha_count)?;
    write_file(&config.output_path, &landscape_csv(&landscape))?;
    let rows = landscape.times.len() * landscape.alphas.len();
    writeln!(out, "wrote {rows} rows to {}", config.output_path.display()).map_err(stdout_error)?;
    if config.emit_svg {
        let path = svg_path(&config.output_path);
        write_file(&path, &landscape_svg(&landscape))?;
        writeln!(out, "wrote {}", path.display()).map_err(stdout_error)?;
    }
    Ok(landscape)
}

/// Prints a `z,E` table of E_{α,β}(z).
pub fn run_ml_eval(alpha: f64, beta: f64, zs: &[f64], out: &mut dyn Write) -> Result<(), CliError> {
    let values = zs
        .iter()
        .map(|&z| {
            ml_two(alpha, beta, z).map_err(|e| match e {
                MlError::Domain { name, .. } => ConfigError::new(name, e.to_string()).into(),
                other => numerical(other),
            })
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    let mut table = String::from("z,E\n");
    for (z, e) in zs.iter().zip(values) {
        let _ = writeln!(table, "{},{}", sci(*z), sci(e));
    }
    out.write_all(table.as_bytes()).map_err(stdout_error)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditSample {
    pub alpha: f64,
    pub t: f64,
    pub min_choi_eigenvalue: f64,
    pub trace_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpAudit {
    pub samples: Vec<AuditSample>,
    pub min_choi_eigenvalue: f64,
    pub pass: bool,
}

/// max over |i⟩⟨j| of |Tr Φ(|i⟩⟨j|) − δ_ij|.
fn propagator_trace_defect(map: &MapMatrix) -> f64 {
    let d = map.dim();
    let m = map.matrix();
    let mut worst = 0.0f64;
    for col in 0..d * d {
        let tr: Complex64 = (0..d).map(|a| m[(a + d * a, col)]).sum();
        let delta = if col % d == col / d { 1.0 } else { 0.0 };
        worst = worst.max((tr - delta).norm());
    }
    worst
}

/// Choi spectrum of E_α(t^α L) on `t_samples` times in [0, t_max] per α.
pub fn cp_audit(config: &ScenarioConfig, t_samples: usize) -> Result<CpAudit, CliError> {
    if t_samples == 0 {
        return Err(ConfigError::new("t_samples", "must be a positive integer").into());
    }
    let generator = config.generator();
    let grid: Vec<(f64, f64)> = config
        .alphas
        .iter()
        .flat_map(|&a| linspace(0.0, config.t_max, t_samples).into_iter().map(move |t| (a, t)))
        .collect();
    let samples = grid
        .par_iter()
        .map(|&(alpha, t)| {
            let map = matrix_ml(alpha, t, &generator).map_err(numerical)?;
            let choi = choi_matrix(&map).map_err(numerical)?;
            Ok(AuditSample {
                alpha,
                t,
                min_choi_eigenvalue: min_hermitian_eigenvalue(&choi),
                trace_defect: propagator_trace_defect(&map),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let min_choi_eigenvalue = samples.iter().map(|s| s.min_choi_eigenvalue).fold(f64::INFINITY, f64::min);
    Ok(CpAudit { pass: min_choi_eigenvalue >= CHOI_FLOOR, min_choi_eigenvalue, samples })
}

pub fn run_cp_audit(config: &ScenarioConfig, t_samples: usize, out: &mut dyn Write) -> Result<CpAudit, CliError> {
    let audit = cp_audit(config, t_samples)?;
    let mut report = String::from("alpha,t,min_choi_eigenvalue,trace_defect\n");
    for s in &audit.samples {
        let _ =
            writeln!(report, "{},{},{},{}", sci(s.alpha), sci(s.t), sci(s.min_choi_eigenvalue), sci(s.trace_defect));
    }
    let verdict = if audit.pass { "PASS" } else { "FAIL" };
    let _ =
        writeln!(report, "{verdict}: min Choi eigenvalue {} (floor {CHOI_FLOOR:e})", sci(audit.min_choi_eigenvalue));
    out.write_all(report.as_bytes()).map_err(stdout_error)?;
    Ok(audit)
}

/// Integrator error against the closed form for each α and step count.
pub fn convergence(config: &ScenarioConfig, step_counts: &[usize]) -> Result<Vec<(f64, ConvergenceTable)>, CliError> {
    let rho0 = config.rho0();
    config
        .alphas
        .iter()
        .map(|&alpha| {
            let params = config.params(alpha)?;
            let problem = CaputoProblem::new(alpha, config.generator(), &rho0, config.t_max, step_counts[0])
                .map_err(numerical)?;
            let exact = |t: f64| ad_density(&rho0, params, t).expect("validated closed form").into_matrix();
            let table = convergence_study(&problem, step_counts, Some(&exact)).map_err(|e| match e {
                crate::fde_solver::SolverError::InvalidStudy => ConfigError::new("steps", e.to_string()).into(),
                other => numerical(other),
            })?;
            Ok((alpha, table))
        })
        .collect()
}

pub fn run_convergence(config: &ScenarioConfig, step_counts: &[usize], out: &mut dyn Write) -> Result<(), CliError> {
    let tables = convergence(config, step_counts)?;
    let mut report = String::from("alpha,steps,max_error,ratio,order\n");
    for (alpha, table) in tables {
        for row in table.rows {
            let opt = |v: Option<f64>| v.map(sci).unwrap_or_default();
            let _ = writeln!(
                report,
                "{},{},{},{},{}",
                sci(alpha),
                row.steps,
                sci(row.max_error),
                opt(row.ratio),
                opt(row.order)
            );
        }
    }
    out.write_all(report.as_bytes()).map_err(stdout_error)
}

#[derive(Parser)]
#[command(name = "fraclindblad", version, about = "Fractional-time Lindblad dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// C_l1(t) curves per fractional order (CSV, optional SVG line plot)
    Curves(ScenarioArgs),
    /// C_l1 over a (t, alpha) grid (CSV, optional SVG heat map)
    Landscape {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 50)]
        alpha_count: usize,
    },
    /// Evaluate E_{alpha,beta}(z)
    #[command(allow_negative_numbers = true)]
    Ml {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long = "z", required = true, num_args = 1.., value_delimiter = ',')]
        z: Vec<f64>,
    },
    /// Choi-matrix positivity of the closed-form propagators
    CpAudit {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 20)]
        t_samples: usize,
    },
    /// Integrator error against the closed form for several step counts
    Convergence {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long = "n", value_delimiter = ',', default_values_t = [250, 500, 1000])]
        step_counts: Vec<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitialFlag {
    Plus,
    Excited,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file of `key = value` lines
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Fractional order (repeatable)
    #[arg(long = "alpha", allow_negative_numbers = true)]
    alphas: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    initial: Option<InitialFlag>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: bool,
}

impl ScenarioArgs {
    fn resolve(self, default_out: &str) -> Result<ScenarioConfig, CliError> {
        let mut config = ScenarioConfig { output_path: PathBuf::from(default_out), ..ScenarioConfig::default() };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                action: "read",
                path: path.clone(),
                source,
            })?;
            config.apply_text(&text)?;
        }
        if let Some(g) = self.gamma {
            config.gamma = g;
        }
        if !self.alphas.is_empty() {
            config.alphas = self.alphas;
        }
        if let Some(t) = self.t_max {
            config.t_max = t;
        }
        if let Some(n) = self.steps {
            config.steps = n;
        }
        match self.initial {
            Some(InitialFlag::Plus) => config.initial_state = InitialState::Plus,
            Some(InitialFlag::Excited) => config.initial_state = InitialState::Excited,
            None => {}
        }
        if let Some(m) = self.method {
            config.method = m;
        }
        if let Some(out) = self.out {
            config.output_path = out;
        }
        config.emit_svg |= self.svg;
        Ok(config.validated()?)
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Curves(args) => run_coherence_curves(&args.resolve("curves.csv")?, out).map(drop),
        Command::Landscape { scenario, alpha_count } => {
            run_coherence_landscape(&scenario.resolve("landscape.csv")?, alpha_count, out).map(drop)
        }
        Command::Ml { alpha, beta, z } => run_ml_eval(alpha, beta, &z, out),
        Command::CpAudit { scenario, t_samples } => {
            run_cp_audit(&scenario.resolve("curves.csv")?, t_samples, out).map(drop)
        }
        Command::Convergence { scenario, step_counts } => {
            run_convergence(&scenario.resolve("curves.csv")?, &step_counts, out)
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
