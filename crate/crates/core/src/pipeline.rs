//! End-to-end runs behind the `scatter` binary: configuration, report
//! document and the five commands.
//!
//! Every command returns an [`Outcome`] carrying the process exit code:
//! 0 success, 2 solvability conditions violated, 3 non-convergence,
//! 4 invalid input or I/O failure.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{
    check_condition7, compute_denominator, compute_xi, forward_F, Condition7Report, Denominator,
    ForwardData, Xi, DEFAULT_D_EPS,
};
use crate::grid::{l2_norm_real, UniformGrid};
use crate::inverse::{
    build_sie, contraction_factor, reconstruct_radial, solvability_report, solve_fixed_point,
    solve_sie, Contraction, FixedPointOptions, SolvabilityReport, SolveOptions,
};
use crate::io;
use crate::profile::{radial_fourier, PotentialSpec, Profile};
use crate::singular::SingularOperator;
use crate::wave::{ls_residual, ScatteringState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONDITIONS: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

pub const SCHEMA_VERSION: u32 = 1;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ConditionsViolated(_)
        | Error::OriginHit { .. }
        | Error::UnderResolved { .. }
        | Error::NotContractive { .. }
        | Error::SignInconsistent { .. }
        | Error::Condition7Violation { .. }
        | Error::ZeroDenominator { .. } => EXIT_CONDITIONS,
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Forward,
    Invert,
    Check,
    Roundtrip,
    Wave,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Forward => "forward",
            Command::Invert => "invert",
            Command::Check => "check",
            Command::Roundtrip => "roundtrip",
            Command::Wave => "wave",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Gaussian,
    Yukawa,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub kind: ProfileKind,
    pub alpha: f64,
    pub mu: f64,
    pub table: Option<PathBuf>,
    pub lambda: f64,
}

impl ProfileConfig {
    pub fn profile(&self) -> Result<Profile> {
        match self.kind {
            ProfileKind::Gaussian => Profile::gaussian(self.alpha),
            ProfileKind::Yukawa => Profile::yukawa(self.mu),
            ProfileKind::Table => {
                let path = self.table.as_ref().ok_or_else(|| {
                    Error::InvalidInput("--profile table needs --table PATH".into())
                })?;
                io::read_profile_table(path)
            }
        }
    }

    pub fn spec(&self) -> Result<PotentialSpec> {
        PotentialSpec::new(self.lambda, self.profile()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl GridConfig {
    pub fn grid(&self) -> Result<UniformGrid> {
        if !self.n.is_power_of_two() || self.n < 8 {
            return Err(Error::InvalidGrid(format!(
                "N must be a power of two and at least 8, got {}",
                self.n
            )));
        }
        UniformGrid::new(self.l, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Collocation,
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    /// Acceptance threshold for the relative equation residual, and for
    /// `roundtrip` also for the error metrics.
    pub tol: f64,
    pub max_iter: usize,
    pub reg: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Collocation,
            a: None,
            tol: 1e-2,
            max_iter: 5000,
            reg: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveConfig {
    pub q: f64,
    pub direction: [f64; 3],
    pub points: Option<PathBuf>,
    pub residual: bool,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub profile: Option<ProfileConfig>,
    pub grid: Option<GridConfig>,
    pub solver: SolverConfig,
    pub wave: Option<WaveConfig>,
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub force: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let need_profile = matches!(
            self.command,
            Command::Forward | Command::Roundtrip | Command::Wave
        );
        if need_profile && self.profile.is_none() {
            return Err(Error::InvalidInput(format!(
                "{} needs --profile",
                self.command.name()
            )));
        }
        if matches!(self.command, Command::Forward | Command::Roundtrip) && self.grid.is_none() {
            return Err(Error::InvalidInput("missing grid".into()));
        }
        if matches!(self.command, Command::Invert | Command::Check) && self.input.is_none() {
            return Err(Error::InvalidInput(format!(
                "{} needs --input F.csv",
                self.command.name()
            )));
        }
        if self.command == Command::Wave && self.wave.is_none() {
            return Err(Error::InvalidInput("wave needs --q".into()));
        }
        if let Some(g) = &self.grid {
            g.grid()?;
        }
        if !(self.solver.tol > 0.0 && self.solver.tol.is_finite()) {
            return Err(Error::InvalidInput("--tol must be positive".into()));
        }
        if self.solver.max_iter == 0 {
            return Err(Error::InvalidInput("--max-iter must be positive".into()));
        }
        if let Some(r) = self.solver.reg {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(Error::InvalidInput("--reg must be nonnegative".into()));
            }
        }
        if let Some(a) = self.solver.a {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidInput("--A must be positive".into()));
            }
        }
        if let Some(p) = &self.profile {
            // A vanishing coupling is allowed only as the plane-wave check of `wave`.
            if !(p.lambda == 0.0 && self.command == Command::Wave) {
                p.spec()?;
            } else {
                p.profile()?;
            }
        }
        if let Some(w) = &self.wave {
            let n = (w.direction.iter().map(|x| x * x).sum::<f64>()).sqrt();
            if !(w.q > 0.0 && w.q.is_finite()) || !(n > 0.0 && n.is_finite()) {
                return Err(Error::InvalidInput(
                    "--q must be positive and --direction nonzero".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub spacing: f64,
}

impl From<&UniformGrid> for GridSummary {
    fn from(g: &UniformGrid) -> Self {
        Self {
            l: g.half_width(),
            n: g.len(),
            spacing: g.spacing(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub grid: Option<GridSummary>,
    pub versions: std::collections::BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition7Summary {
    pub min_abs_d: f64,
    pub argmin_q: f64,
    pub failing_shells: Vec<f64>,
    pub route: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    /// Certificate used by the fixed-point method.
    pub contraction: Option<Contraction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSummary {
    pub lambda_sign: i8,
    pub profile_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub xi_rel_l2: f64,
    /// `sup |m − m_exact| / sup |m_exact|` over `q ∈ [0.2, 10]`.
    pub m_sup_rel: f64,
    pub lambda_sign_ok: bool,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveSummary {
    pub q: f64,
    pub k: [f64; 3],
    pub d_re: f64,
    pub d_im: f64,
    pub c_re: f64,
    pub c_im: f64,
    pub amplitude_re: f64,
    pub amplitude_im: f64,
    pub residuals: Option<Vec<f64>>,
}

/// The JSON report written by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub command: Command,
    pub exit_code: i32,
    pub status: String,
    pub message: Option<String>,
    pub config: RunConfig,
    pub conditions: Option<SolvabilityReport>,
    pub condition7: Option<Condition7Summary>,
    pub solver: Option<SolverSummary>,
    pub reconstruction: Option<ReconstructionSummary>,
    pub metrics: Option<Metrics>,
    pub wave: Option<WaveSummary>,
    pub outputs: Vec<String>,
    pub provenance: Provenance,
}

impl ReportDocument {
    fn new(config: &RunConfig) -> Self {
        let mut versions = std::collections::BTreeMap::new();
        versions.insert(
            "scatter-core".to_owned(),
            env!("CARGO_PKG_VERSION").to_owned(),
        );
        Self {
            schema: SCHEMA_VERSION,
            command: config.command,
            exit_code: EXIT_OK,
            status: status_name(EXIT_OK).to_owned(),
            message: None,
            config: config.clone(),
            conditions: None,
            condition7: None,
            solver: None,
            reconstruction: None,
            metrics: None,
            wave: None,
            outputs: Vec::new(),
            provenance: Provenance {
                grid: None,
                versions,
            },
        }
    }

    fn finish(&mut self, code: i32, message: Option<String>) {
        self.exit_code = code;
        self.status = status_name(code).to_owned();
        self.message = message;
    }
}

fn status_name(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_CONDITIONS => "solvability-violated",
        EXIT_NONCONVERGENCE => "non-convergence",
        _ => "invalid-input",
    }
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    /// `None` when the run failed before a report could be written.
    pub report: Option<ReportDocument>,
    pub message: Option<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    report: &'a mut ReportDocument,
}

impl Writer<'_> {
    fn file(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        io::write_atomic(&self.dir.join(name), bytes)?;
        self.report.outputs.push(name.to_owned());
        Ok(())
    }
}

fn write_report(dir: &Path, report: &mut ReportDocument) -> Result<()> {
    report.outputs.push("report.json".to_owned());
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    io::write_atomic(&dir.join("report.json"), text.as_bytes())
}

/// Run a validated configuration.
pub fn run(config: &RunConfig) -> Outcome {
    if let Err(e) = config.validate() {
        return Outcome {
            exit_code: EXIT_INPUT,
            report: None,
            message: Some(e.to_string()),
        };
    }
    if let Err(e) = std::fs::create_dir_all(&config.out) {
        return Outcome {
            exit_code: EXIT_INPUT,
            report: None,
            message: Some(format!("cannot create {}: {e}", config.out.display())),
        };
    }
    let mut report = ReportDocument::new(config);
    let result = match config.command {
        Command::Forward => cmd_forward(config, &mut report),
        Command::Invert => cmd_invert(config, &mut report),
        Command::Check => cmd_check(config, &mut report),
        Command::Roundtrip => cmd_roundtrip(config, &mut report),
        Command::Wave => cmd_wave(config, &mut report),
    };
    let (code, message, keep_report) = match result {
        Ok(code) => (code, report.message.clone(), true),
        Err(e) => {
            let code = exit_code(&e);
            // Input failures leave no report unless the run got far enough
            // to know its grid.
            let keep = code != EXIT_INPUT || report.provenance.grid.is_some();
            (code, Some(e.to_string()), keep)
        }
    };
    report.finish(code, message.clone());
    if !keep_report {
        return Outcome {
            exit_code: code,
            report: None,
            message,
        };
    }
    match write_report(&config.out, &mut report) {
        Ok(()) => Outcome {
            exit_code: code,
            report: Some(report),
            message,
        },
        Err(e) => Outcome {
            exit_code: EXIT_INPUT,
            report: None,
            message: Some(e.to_string()),
        },
    }
}

fn summarize_condition7(r: &Condition7Report, d: &Denominator) -> Condition7Summary {
    Condition7Summary {
        min_abs_d: r.min_abs_d,
        argmin_q: r.argmin_q,
        failing_shells: r.failing_shells.clone(),
        route: serde_json::to_value(d.route())
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default(),
    }
}

/// `ξ`, `D` (Hilbert route) and `F` written as `xi.csv`, `D.csv`, `F.csv`.
pub fn cmd_forward(config: &RunConfig, report: &mut ReportDocument) -> Result<i32> {
    let spec = config.profile.as_ref().expect("validated").spec()?;
    let grid = config.grid.expect("validated").grid()?;
    report.provenance.grid = Some((&grid).into());
    let op = SingularOperator::new(grid);
    let xi = compute_xi(&spec, &grid)?;
    let d = compute_denominator(&xi, &op)?;
    let c7 = check_condition7(&d, DEFAULT_D_EPS);
    report.condition7 = Some(summarize_condition7(&c7, &d));
    if !c7.holds() && !config.force {
        report.message = Some(format!(
            "resolvent denominator vanishes on {} shell(s)",
            c7.failing_shells.len()
        ));
        return Ok(EXIT_CONDITIONS);
    }
    let f = forward_F(&xi, &d)?;
    let points = grid.points();
    let mut w = Writer {
        dir: &config.out,
        report,
    };
    w.file("F.csv", &io::complex_table(&points, f.values())?)?;
    w.file("xi.csv", &io::real_table("xi", &points, &xi.real_values())?)?;
    w.file(
        "D.csv",
        &io::complex_table(&grid.nonneg_points(), d.nonneg())?,
    )?;
    Ok(EXIT_OK)
}

fn read_input(config: &RunConfig, report: &mut ReportDocument) -> Result<ForwardData> {
    let f = io::read_forward_data(config.input.as_ref().expect("validated"))?;
    report.provenance.grid = Some(f.grid().into());
    Ok(f)
}

/// Solvability diagnostics of `F.csv`.
pub fn cmd_check(config: &RunConfig, report: &mut ReportDocument) -> Result<i32> {
    let f = read_input(config, report)?;
    let conditions = solvability_report(&f);
    let gate = conditions.require_solvable();
    report.conditions = Some(conditions);
    match gate {
        Ok(()) => Ok(EXIT_OK),
        Err(e) => {
            report.message = Some(e.to_string());
            Ok(EXIT_CONDITIONS)
        }
    }
}

struct Solved {
    xi: Xi,
    summary: SolverSummary,
}

/// Solve for `ξ` with the configured method. Non-convergence is returned
/// as `Ok` with `converged = false` and the last iterate.
fn solve(f: &ForwardData, config: &RunConfig, conditions: &SolvabilityReport) -> Result<Solved> {
    let grid = *f.grid();
    let op = SingularOperator::new(grid);
    let s = &config.solver;
    match s.method {
        Method::Collocation => {
            let opts = SolveOptions {
                tol: s.tol,
                max_iter: s.max_iter,
                regularization: s.reg,
                force: config.force,
            };
            match solve_sie(&build_sie(f), &op, &opts) {
                Ok(sol) => Ok(Solved {
                    xi: sol.xi,
                    summary: SolverSummary {
                        method: s.method,
                        iterations: sol.iterations,
                        residual: sol.residual,
                        converged: true,
                        contraction: None,
                    },
                }),
                Err(Error::NonConvergence {
                    iterations,
                    residual,
                    best: Some(best),
                }) => Ok(Solved {
                    xi: crate::inverse::xi_from_full(&grid, &best)?,
                    summary: SolverSummary {
                        method: s.method,
                        iterations,
                        residual,
                        converged: false,
                        contraction: None,
                    },
                }),
                Err(e) => Err(e),
            }
        }
        Method::FixedPoint => {
            let a = match s.a.or(conditions.contraction.map(|c| c.a)) {
                Some(a) => a,
                None => {
                    return Err(Error::NotContractive {
                        a: f64::NAN,
                        factor: contraction_factor(f, grid.spacing()),
                    })
                }
            };
            let opts = FixedPointOptions {
                tol: 1e-13,
                max_iter: s.max_iter,
            };
            let sol = solve_fixed_point(f, a, &op, &opts);
            let (xi, iterations, converged) = match sol {
                Ok(sol) => (sol.xi, sol.iterations, true),
                Err(Error::NonConvergence {
                    iterations,
                    best: Some(best),
                    ..
                }) => (
                    crate::inverse::xi_from_full(&grid, &best)?,
                    iterations,
                    false,
                ),
                Err(e) => return Err(e),
            };
            let residual = build_sie(f).residual(&op, &xi);
            let converged = converged && residual <= s.tol;
            Ok(Solved {
                xi,
                summary: SolverSummary {
                    method: s.method,
                    iterations,
                    residual,
                    converged,
                    contraction: Some(Contraction {
                        a,
                        factor: contraction_factor(f, a),
                    }),
                },
            })
        }
    }
}

fn gate_or_report(
    config: &RunConfig,
    report: &mut ReportDocument,
    conditions: &SolvabilityReport,
) -> Option<i32> {
    if let Err(e) = conditions.require_solvable() {
        if config.force {
            log::warn!("{e}; continuing because --force was given, the solution may not be unique");
        } else {
            report.message = Some(e.to_string());
            return Some(EXIT_CONDITIONS);
        }
    }
    None
}

/// Recover `ξ` and `m(q)` from `F.csv`.
pub fn cmd_invert(config: &RunConfig, report: &mut ReportDocument) -> Result<i32> {
    let f = read_input(config, report)?;
    let conditions = solvability_report(&f);
    report.conditions = Some(conditions.clone());
    if let Some(code) = gate_or_report(config, report, &conditions) {
        return Ok(code);
    }
    let solved = solve(&f, config, &conditions)?;
    let converged = solved.summary.converged;
    report.solver = Some(solved.summary);
    let grid = *f.grid();
    let mut w = Writer {
        dir: &config.out,
        report,
    };
    w.file(
        "xi.csv",
        &io::real_table("xi", &grid.points(), &solved.xi.real_values())?,
    )?;
    if !converged {
        w.report.message = Some("residual above --tol".into());
        return Ok(EXIT_NONCONVERGENCE);
    }
    let rec = reconstruct_radial(&solved.xi)?;
    w.file("profile.csv", &io::real_table("m", &rec.q, &rec.m)?)?;
    w.report.reconstruction = Some(ReconstructionSummary {
        lambda_sign: rec.lambda_sign,
        profile_file: Some("profile.csv".into()),
    });
    Ok(EXIT_OK)
}

/// `|√λ ψ̂₀(q)|` for the configured potential.
fn exact_modulus(spec: &PotentialSpec, q: f64) -> Result<f64> {
    Ok(spec.lambda.value().abs().sqrt() * radial_fourier(&spec.profile, q)?.norm())
}

/// Forward data with the autocorrelation route for `D`, inverted with the
/// configured solver, compared against the exact `ξ` and `m`.
pub fn cmd_roundtrip(config: &RunConfig, report: &mut ReportDocument) -> Result<i32> {
    let spec = config.profile.as_ref().expect("validated").spec()?;
    let grid = config.grid.expect("validated").grid()?;
    report.provenance.grid = Some((&grid).into());
    let xi = compute_xi(&spec, &grid)?;
    let d = Denominator::from_autocorrelation(&spec, &grid)?;
    let c7 = check_condition7(&d, DEFAULT_D_EPS);
    report.condition7 = Some(summarize_condition7(&c7, &d));
    if !c7.holds() && !config.force {
        report.message = Some("resolvent denominator vanishes on the grid".into());
        return Ok(EXIT_CONDITIONS);
    }
    let f = forward_F(&xi, &d)?;
    let conditions = solvability_report(&f);
    report.conditions = Some(conditions.clone());
    if let Some(code) = gate_or_report(config, report, &conditions) {
        return Ok(code);
    }
    let solved = solve(&f, config, &conditions)?;
    let converged = solved.summary.converged;
    report.solver = Some(solved.summary);

    let diff: Vec<f64> = solved
        .xi
        .real_values()
        .iter()
        .zip(xi.real_values())
        .map(|(a, b)| a - b)
        .collect();
    let xi_rel_l2 = l2_norm_real(&diff, grid.spacing()) / xi.l2_norm();
    let (m_sup_rel, lambda_sign_ok) = match reconstruct_radial(&solved.xi) {
        Ok(rec) => {
            let mut worst = 0.0_f64;
            let mut scale = 0.0_f64;
            for (q, m) in rec.q.iter().zip(&rec.m) {
                if (0.2..=10.0).contains(q) {
                    let exact = exact_modulus(&spec, *q)?;
                    worst = worst.max((m - exact).abs());
                    scale = scale.max(exact);
                }
            }
            (worst / scale, rec.lambda_sign as f64 == spec.lambda.sign())
        }
        Err(Error::SignInconsistent { .. }) | Err(Error::NoPotential) => (f64::INFINITY, false),
        Err(e) => return Err(e),
    };
    let tol = config.solver.tol;
    report.metrics = Some(Metrics {
        xi_rel_l2,
        m_sup_rel,
        lambda_sign_ok,
        tol,
    });
    if converged && xi_rel_l2 <= tol && m_sup_rel <= tol && lambda_sign_ok {
        Ok(EXIT_OK)
    } else {
        report.message = Some("error metrics above --tol".into());
        Ok(EXIT_NONCONVERGENCE)
    }
}

fn default_points(direction: [f64; 3]) -> Vec<[f64; 3]> {
    [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0]
        .iter()
        .map(|&t| direction.map(|d| d * t))
        .collect()
}

fn read_points(path: &Path) -> Result<Vec<[f64; 3]>> {
    let text = std::fs::read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != ["x1", "x2", "x3"] {
        return Err(Error::InvalidInput(
            "points file needs header x1,x2,x3".into(),
        ));
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "line {}: expected 3 fields",
                i + 2
            )));
        }
        let mut p = [0.0; 3];
        for (k, v) in p.iter_mut().enumerate() {
            *v = rec[k]
                .parse()
                .ok()
                .filter(|x: &f64| x.is_finite())
                .ok_or_else(|| Error::InvalidInput(format!("line {}: bad coordinate", i + 2)))?;
        }
        out.push(p);
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("points file has no rows".into()));
    }
    Ok(out)
}

/// `ψ(x, k)` at the requested points, written as `psi.csv`.
pub fn cmd_wave(config: &RunConfig, report: &mut ReportDocument) -> Result<i32> {
    let pc = config.profile.as_ref().expect("validated");
    let wc = config.wave.as_ref().expect("validated");
    let norm = wc.direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dir = wc.direction.map(|x| x / norm);
    let k = dir.map(|x| x * wc.q);
    let points = match &wc.points {
        Some(p) => read_points(p)?,
        None => default_points(dir),
    };
    let mut rows = Vec::with_capacity(points.len());
    if pc.lambda == 0.0 {
        // No potential: the scattering state is the plane wave.
        for x in &points {
            let psi = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
            rows.push(vec![x[0], x[1], x[2], psi.re, psi.im]);
        }
        report.wave = Some(WaveSummary {
            q: wc.q,
            k,
            d_re: 1.0,
            d_im: 0.0,
            c_re: 0.0,
            c_im: 0.0,
            amplitude_re: 0.0,
            amplitude_im: 0.0,
            residuals: wc.residual.then(|| vec![0.0; points.len()]),
        });
    } else {
        let spec = pc.spec()?;
        let state = ScatteringState::new(&spec, k)?;
        let mut residuals = Vec::new();
        for x in &points {
            let psi = state.psi(*x)?;
            rows.push(vec![x[0], x[1], x[2], psi.re, psi.im]);
            if wc.residual {
                residuals.push(ls_residual(&state, *x)?);
            }
        }
        let f = state.far_field_amplitude()?;
        report.wave = Some(WaveSummary {
            q: wc.q,
            k,
            d_re: state.d.re,
            d_im: state.d.im,
            c_re: state.c.re,
            c_im: state.c.im,
            amplitude_re: f.re,
            amplitude_im: f.im,
            residuals: wc.residual.then_some(residuals),
        });
    }
    let mut w = Writer {
        dir: &config.out,
        report,
    };
    w.file(
        "psi.csv",
        &io::columns_table(&["x1", "x2", "x3", "re", "im"], &rows)?,
    )?;
    Ok(EXIT_OK)
}
