//! The `solab` command line.
//!
//! Every command emits a report: a list of verdicts
//! `{check, value, bound, tolerance, pass}`, command-specific data, and for
//! most commands a table. `--format json` (default) prints the report,
//! `--format csv` prints the table. `--csv PATH` additionally writes the table.
//!
//! Exit codes: 0 when every check passes, 1 when one fails (each failure is
//! also written to stderr as a JSON line), 2 for usage errors and malformed
//! input, 3 for an inadmissible ε-profile.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::e2::{
    bolt_smoothness, classify_cauchy, distance_profile, monitors, residual_samples, shoot_unstable, Classification,
    E2Error, E2State, E2Trajectory, EpsilonProfile, ShootSettings, T_INDEX,
};
use crate::frame::spec::FrameSpec;
use crate::frame::{check_point, point_soliton, FrameError, FrameStructure};
use crate::heisenberg::special::{derivative_relation_residual, recursion_residual};
use crate::heisenberg::{
    big_f, dim4_operator, f_prime, f_second, sec_extremes_dim4, type_check, HeisenbergError, HeisenbergSoliton, PhiEnd,
};
use crate::numerics::{fd_derivative, linspace, logspace, Growth, IvpSolver};
use crate::steady::{SteadyError, SteadyII};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Numerical checks for Kähler–Ricci solitons and skew-solitons.
#[derive(Debug, Parser)]
#[command(name = "solab", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format of the main artifact.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write the command's table as CSV to this path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Override the residual tolerance of the command (each command documents
    /// its default). Closed-form bounds are not affected.
    #[arg(long, allow_negative_numbers = true, env = "SOLAB_TOL", global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The explicit expanding solitons on ℝ × Heis_{2n+1}.
    #[command(subcommand)]
    Heisenberg(HeisenbergCmd),
    /// E(2) skew-solitons.
    #[command(subcommand)]
    E2(E2Cmd),
    /// Generic frame documents.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Steady case-(II) metrics.
    #[command(subcommand)]
    Steady(SteadyCmd),
}

#[derive(Debug, Subcommand)]
pub enum HeisenbergCmd {
    /// F_n and its derivatives, metric, curvatures and Hessian at one φ.
    Eval {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Soliton, Kähler and curvature residuals of the frame on a log grid
    /// (tolerance default 1e-8).
    Verify {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.01)]
        phi_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 50.0)]
        phi_max: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Curvature table with the Ricci and scalar pinching checks; for n = 1
    /// also the curvature-operator determinant identity.
    Curvature {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1e-3)]
        phi_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1e3)]
        phi_max: f64,
        #[arg(long, default_value_t = 60)]
        samples: usize,
    },
    /// Length of the φ-line between two values and toward both ends, and the
    /// gradient-flow time toward both ends.
    Distance {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        phi0: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 4.0)]
        phi1: f64,
    },
    /// Extremes of the sectional curvature over sampled planes.
    Bounds {
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Planes sampled per grid point.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1e-3)]
        phi_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1e3)]
        phi_max: f64,
        #[arg(long, default_value_t = 60)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ShootArgs {
    /// Equilibrium (q, 0, q) the unstable curve leaves.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-8)]
    pub delta: f64,
    /// `zero`, `quadratic-bump`, `poly:β`, an inline JSON object or a JSON file.
    #[arg(long, default_value = "zero")]
    pub epsilon: String,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e3)]
    pub b_max: f64,
}

#[derive(Debug, Subcommand)]
pub enum E2Cmd {
    /// Shoot along the unstable curve; the table is the trajectory
    /// (tolerance default 1e-7).
    Integrate(ShootArgs),
    /// Skew-soliton residual through the frame engine, identities, and the
    /// distance checks (tolerance default 1e-7).
    Verify {
        #[command(flatten)]
        shoot: ShootArgs,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Smoothness limits at the bolt.
    Bolt(ShootArgs),
    /// Integrate Cauchy data backward and classify it.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, default_value = "zero")]
        epsilon: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FrameCmd {
    /// Evaluate every residual the engine knows on a grid (tolerance default 1e-8).
    Check {
        #[arg(long)]
        spec: PathBuf,
        /// Grid in the frame's evaluation coordinate: `v1,v2,...` or
        /// `lo:hi:count`. Defaults to the family's natural grid.
        #[arg(long)]
        tau_grid: Option<String>,
        /// Skip the soliton equations.
        #[arg(long)]
        geometry_only: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SteadyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub k1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub k2: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
}

#[derive(Debug, Subcommand)]
pub enum SteadyCmd {
    /// c(t) on a grid with the ODE residual by finite differences, the frame
    /// soliton residual, and the incompleteness verdict.
    Eval {
        #[command(flatten)]
        params: SteadyArgs,
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Normal-geodesic length between t0 and t1, closed form and quadrature.
    Length {
        #[command(flatten)]
        params: SteadyArgs,
        #[arg(long, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, allow_negative_numbers = true)]
        t1: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub value: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    /// `value ≤ bound`.
    pub fn at_most(check: &str, value: f64, bound: f64) -> Self {
        Verdict { check: check.into(), value, bound, tolerance: bound, pass: value <= bound }
    }

    /// `value ≥ bound`.
    pub fn at_least(check: &str, value: f64, bound: f64) -> Self {
        Verdict { check: check.into(), value, bound, tolerance: 0.0, pass: value >= bound }
    }

    /// `|value − target| ≤ tolerance`.
    pub fn near(check: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Verdict { check: check.into(), value, bound: target, tolerance, pass: (value - target).abs() <= tolerance }
    }

    /// `lo < value < hi`, reported against the nearer end.
    pub fn inside(check: &str, value: f64, lo: f64, hi: f64) -> Self {
        let bound = if (value - lo).abs() < (hi - value).abs() { lo } else { hi };
        Verdict { check: check.into(), value, bound, tolerance: 0.0, pass: value > lo && value < hi }
    }

    pub fn flag(check: &str, ok: bool) -> Self {
        Verdict { check: check.into(), value: if ok { 1.0 } else { 0.0 }, bound: 1.0, tolerance: 0.0, pass: ok }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| v.to_string()).collect());
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(CliError::io)?;
        for r in &self.rows {
            w.write_record(r).map_err(CliError::io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(e.into_error()))?;
        String::from_utf8(bytes).map_err(CliError::io)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub verdicts: Vec<Verdict>,
    pub data: Value,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    fn new(command: &str, verdicts: Vec<Verdict>, data: Value, table: Option<Table>) -> Self {
        let pass = verdicts.iter().all(|v| v.pass);
        Report { command: command.into(), pass, verdicts, data, table }
    }

    fn verdict_table(&self) -> Table {
        let mut t = Table::new(&["check", "value", "bound", "tolerance", "pass"]);
        for v in &self.verdicts {
            t.rows.push(vec![
                v.check.clone(),
                v.value.to_string(),
                v.bound.to_string(),
                v.tolerance.to_string(),
                v.pass.to_string(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn usage(m: impl std::fmt::Display) -> Self {
        CliError { code: 2, kind: "usage", message: m.to_string() }
    }
    fn failed(m: impl std::fmt::Display) -> Self {
        CliError { code: 1, kind: "evaluation", message: m.to_string() }
    }
    fn inadmissible(m: impl std::fmt::Display) -> Self {
        CliError { code: 3, kind: "inadmissible-epsilon", message: m.to_string() }
    }
    fn io(m: impl std::fmt::Display) -> Self {
        CliError { code: 2, kind: "io", message: m.to_string() }
    }
}

impl From<HeisenbergError> for CliError {
    fn from(e: HeisenbergError) -> Self {
        match e {
            HeisenbergError::PhiNonPositive(_)
            | HeisenbergError::NTooLarge(_)
            | HeisenbergError::QOutsideDomain { .. } => CliError::usage(e),
            _ => CliError::failed(e),
        }
    }
}

impl From<E2Error> for CliError {
    fn from(e: E2Error) -> Self {
        match e {
            E2Error::Inadmissible(_) => CliError::inadmissible(e),
            E2Error::NonPositive(..) | E2Error::BadDelta(_) => CliError::usage(e),
            _ => CliError::failed(e),
        }
    }
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::Spec(_) => CliError::usage(e),
            _ => CliError::failed(e),
        }
    }
}

impl From<SteadyError> for CliError {
    fn from(e: SteadyError) -> Self {
        match e {
            SteadyError::Inadmissible(_) | SteadyError::OutsideInterval { .. } => CliError::usage(e),
            _ => CliError::failed(e),
        }
    }
}

/// Entry point of the binary.
pub fn run() -> ExitCode {
    ExitCode::from(run_from(std::env::args_os()))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cfg).and_then(|r| emit(&cfg, &r).map(|_| r)) {
        Ok(report) => {
            let mut err = std::io::stderr().lock();
            for v in report.verdicts.iter().filter(|v| !v.pass) {
                let _ = writeln!(err, "{}", json!({ "failed": v }));
            }
            u8::from(!report.pass)
        }
        Err(e) => {
            let record = json!({ "error": e.kind, "message": e.message, "exit_code": e.code });
            eprintln!("{record}");
            e.code
        }
    }
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(CliError::io)
        }
    }
}

fn emit(cfg: &RunConfig, r: &Report) -> Result<(), CliError> {
    let main = match cfg.format {
        Format::Json => serde_json::to_string_pretty(r).map_err(CliError::io)? + "\n",
        Format::Csv => r.table.clone().unwrap_or_else(|| r.verdict_table()).to_csv()?,
    };
    write_to(cfg.output.as_deref(), &main)?;
    if let Some(p) = &cfg.csv {
        write_to(Some(p), &r.table.clone().unwrap_or_else(|| r.verdict_table()).to_csv()?)?;
    }
    Ok(())
}

/// Runs a parsed configuration without writing anything.
pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match &cfg.command {
        Command::Heisenberg(c) => heisenberg(c, cfg),
        Command::E2(c) => e2(c, cfg),
        Command::Frame(c) => frame(c, cfg),
        Command::Steady(c) => steady(c, cfg),
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!("--{name} must be positive, got {v}")))
    }
}

fn grid_args(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, CliError> {
    positive("phi-min", lo)?;
    positive("phi-max", hi)?;
    if !(lo < hi) || count < 2 {
        return Err(CliError::usage("need phi-min < phi-max and at least two samples"));
    }
    Ok(logspace(lo, hi, count))
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken evaluation cannot pass.
    it.into_iter().fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

fn growth_json(g: &Growth) -> Value {
    serde_json::to_value(g).unwrap_or(Value::Null)
}

fn heisenberg(c: &HeisenbergCmd, cfg: &RunConfig) -> Result<Report, CliError> {
    match *c {
        HeisenbergCmd::Eval { n, phi } => {
            let s = HeisenbergSoliton::new(n)?;
            positive("phi", phi)?;
            let (fv, fp, fpp) = (big_f(n, phi)?, f_prime(n, phi)?, f_second(n, phi)?);
            let g = s.metric_components(phi)?;
            let curv = s.curvatures(phi)?;
            let hess = s.hessian(phi)?;
            let rec = recursion_residual(n, phi)?;
            let der = derivative_relation_residual(n, phi)?;
            let verdicts = vec![
                Verdict::at_least("F-positive", fv, f64::MIN_POSITIVE),
                Verdict::at_most("recursion", rec, 1e-10),
                Verdict::at_most("derivative-relation", der, 1e-10),
            ];
            let mut t = Table::new(&["quantity", "value"]);
            for (k, v) in [
                ("F", fv),
                ("F_prime", fp),
                ("F_second", fpp),
                ("f", -phi),
                ("g_fiber", g.g_fiber),
                ("g_zeta", g.g_zeta),
                ("g_phiphi", g.g_phiphi),
                ("sec_xy", curv.sec_xy[0]),
                ("sec_kx", curv.sec_kx[0]),
                ("sec_kt", curv.sec_kt),
                ("ricci_xy", curv.ricci_xy[0]),
                ("ricci_kt", curv.ricci_kt),
                ("scalar", curv.scalar),
                ("hess_xx", hess.xx),
                ("hess_kk", hess.kk),
            ] {
                t.rows.push(vec![k.into(), v.to_string()]);
            }
            let data = json!({
                "n": n, "phi": phi, "F": fv, "F_prime": fp, "F_second": fpp, "f": -phi,
                "metric": g, "curvature": curv, "hessian": hess,
            });
            Ok(Report::new("heisenberg eval", verdicts, data, Some(t)))
        }
        HeisenbergCmd::Verify { n, phi_min, phi_max, samples } => {
            let s = HeisenbergSoliton::new(n)?;
            let grid = grid_args(phi_min, phi_max, samples)?;
            let tol = cfg.tol.unwrap_or(1e-8);
            let fs = s.frame();
            let rows: Vec<[f64; 7]> = grid
                .par_iter()
                .map(|&phi| -> Result<[f64; 7], CliError> {
                    let p = fs.point(phi)?;
                    let r = point_soliton(&p)?;
                    let chk = check_point(&p);
                    let closed = s.curvatures(phi)?;
                    let a = &chk.curvature;
                    let gap = [
                        (a.sec_xy[0], closed.sec_xy[0]),
                        (a.sec_kx[0], closed.sec_kx[0]),
                        (a.sec_kt, closed.sec_kt),
                        (a.ricci_xy[0], closed.ricci_xy[0]),
                        (a.ricci_kt, closed.ricci_kt),
                        (a.scalar, closed.scalar),
                    ]
                    .iter()
                    .map(|(x, y)| (x - y).abs() / (1.0 + y.abs()))
                    .fold(0.0, f64::max);
                    Ok([
                        phi,
                        r.skew + r.killing_max(),
                        r.identity3,
                        chk.kahler.max(),
                        gap,
                        a.ricci_disagreement,
                        chk.integrability,
                    ])
                })
                .collect::<Result<_, _>>()?;
            let col = |i: usize| max_abs(rows.iter().map(|r| r[i]));
            let verdicts = vec![
                Verdict::at_most("soliton-residual", col(1), tol),
                Verdict::at_most("identity3", col(2), tol),
                Verdict::at_most("kahler", col(3), 1e-10),
                Verdict::at_most("closed-form-curvature", col(4), tol),
                Verdict::at_most("ricci-consistency", col(5), tol),
                Verdict::at_most("integrability", col(6), 1e-10),
            ];
            let mut t = Table::new(&[
                "phi",
                "soliton_residual",
                "identity3",
                "kahler",
                "closed_form_gap",
                "ricci_disagreement",
                "integrability",
            ]);
            rows.iter().for_each(|r| t.push(r));
            let data = json!({ "n": n, "samples": samples, "max_soliton_residual": col(1) });
            Ok(Report::new("heisenberg verify", verdicts, data, Some(t)))
        }
        HeisenbergCmd::Curvature { n, phi_min, phi_max, samples } => {
            let s = HeisenbergSoliton::new(n)?;
            let grid = grid_args(phi_min, phi_max, samples)?;
            let m = s.m() as f64;
            let mut header = vec!["phi", "sec_xy", "sec_kx", "sec_kt", "ricci_xy", "ricci_kt", "scalar"];
            if n == 1 {
                header.extend(["p", "q_mix", "r", "determinant", "determinant_closed"]);
            }
            let mut t = Table::new(&header);
            let (mut ric_lo, mut ric_hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let (mut scal_lo, mut scal_hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let mut frame_max = f64::NEG_INFINITY;
            let mut det_gap: f64 = 0.0;
            for &phi in &grid {
                let c = s.curvatures(phi)?;
                for &r in c.ricci_xy.iter().chain(std::iter::once(&c.ricci_kt)) {
                    ric_lo = ric_lo.min(r);
                    ric_hi = ric_hi.max(r);
                }
                scal_lo = scal_lo.min(c.scalar);
                scal_hi = scal_hi.max(c.scalar);
                for &v in c.sec_xy.iter().chain(&c.sec_kx).chain(std::iter::once(&c.sec_kt)) {
                    frame_max = frame_max.max(v);
                }
                let mut row = vec![phi, c.sec_xy[0], c.sec_kx[0], c.sec_kt, c.ricci_xy[0], c.ricci_kt, c.scalar];
                if n == 1 {
                    let op = dim4_operator(phi)?;
                    det_gap = det_gap
                        .max((op.determinant - op.determinant_closed).abs() / op.determinant_closed.abs().max(1.0));
                    row.extend([op.p, op.q_mix, op.r, op.determinant, op.determinant_closed]);
                }
                t.push(&row);
            }
            let mut verdicts = vec![
                Verdict::inside("ricci-min", ric_lo, -1.0, 0.0),
                Verdict::inside("ricci-max", ric_hi, -1.0, 0.0),
                Verdict::inside("scalar-min", scal_lo, -2.0 * m, 0.0),
                Verdict::inside("scalar-max", scal_hi, -2.0 * m, 0.0),
                Verdict::inside("frame-sec-max", frame_max, f64::NEG_INFINITY, 0.0),
            ];
            if n == 1 {
                verdicts.push(Verdict::at_most("determinant-identity", det_gap, 1e-10));
            }
            let data = json!({ "n": n, "m": s.m(), "ricci": [ric_lo, ric_hi], "scalar": [scal_lo, scal_hi] });
            Ok(Report::new("heisenberg curvature", verdicts, data, Some(t)))
        }
        HeisenbergCmd::Distance { n, phi0, phi1 } => {
            let s = HeisenbergSoliton::new(n)?;
            positive("phi0", phi0)?;
            positive("phi1", phi1)?;
            let d = s.distance(phi0, PhiEnd::At(phi1))?.value().unwrap_or(f64::NAN);
            let lower = HeisenbergSoliton::distance_lower_bound(phi0, phi1);
            let to_inf = s.distance(phi0, PhiEnd::Infinity)?;
            let to_zero = s.distance(phi0, PhiEnd::Zero)?;
            let flow_inf = s.gradient_flow_time(phi0, PhiEnd::Infinity)?;
            let flow_zero = s.gradient_flow_time(phi0, PhiEnd::Zero)?;
            let verdicts = vec![
                Verdict::at_least("distance-lower-bound", d, lower),
                Verdict::flag("distance-to-infinity-diverges", to_inf.diverges()),
                Verdict::flag("distance-to-zero-diverges", to_zero.diverges()),
                Verdict::flag("flow-time-to-infinity-diverges", flow_inf.diverges()),
                Verdict::flag("flow-time-to-zero-diverges", flow_zero.diverges()),
            ];
            let data = json!({
                "n": n, "phi0": phi0, "phi1": phi1, "distance": d, "lower_bound": lower,
                "to_infinity": growth_json(&to_inf), "to_zero": growth_json(&to_zero),
                "flow_time_to_infinity": growth_json(&flow_inf), "flow_time_to_zero": growth_json(&flow_zero),
            });
            Ok(Report::new("heisenberg distance", verdicts, data, None))
        }
        HeisenbergCmd::Bounds { n, samples, phi_min, phi_max, grid } => {
            let s = HeisenbergSoliton::new(n)?;
            let phis = grid_args(phi_min, phi_max, grid)?;
            let rep = type_check(&s, &phis, if n == 1 { 0 } else { samples }, cfg.seed)?;
            let mut verdicts = vec![Verdict::flag("curvature-bounded", rep.verdict == "bounded")];
            let mut data = json!({ "n": n, "seed": cfg.seed, "type_iii": rep });
            if n == 1 {
                let e = sec_extremes_dim4(&phis, samples, cfg.seed)?;
                verdicts.push(Verdict::inside("sec-inf", e.inf, -2.0 / 3.0, 0.0));
                verdicts.push(Verdict::inside("sec-sup", e.sup, -2.0 / 3.0, 0.0));
                data["extremes"] = serde_json::to_value(&e).unwrap_or(Value::Null);
            }
            Ok(Report::new("heisenberg bounds", verdicts, data, None))
        }
    }
}

fn parse_eps(s: &str, b_max: f64) -> Result<EpsilonProfile, CliError> {
    let eps = EpsilonProfile::parse(s).map_err(CliError::usage)?;
    let a = eps.admissibility(b_max);
    let mut violated = Vec::new();
    if !a.vanishes_at_zero {
        violated.push("epsilon(0) = 0");
    }
    if !a.nonnegative {
        violated.push("epsilon >= 0");
    }
    if !a.slope_condition {
        violated.push("epsilon'(b) > -2b");
    }
    if !violated.is_empty() {
        return Err(CliError::inadmissible(format!("{} violates: {}", eps.name(), violated.join("; "))));
    }
    Ok(eps)
}

fn shoot(a: &ShootArgs) -> Result<E2Trajectory, CliError> {
    positive("q", a.q)?;
    positive("b-max", a.b_max)?;
    let eps = parse_eps(&a.epsilon, a.b_max)?;
    let s = ShootSettings { delta: a.delta, b_max: a.b_max, ..Default::default() };
    Ok(shoot_unstable(a.q, &eps, &s)?)
}

fn shoot_data(a: &ShootArgs, t: &E2Trajectory) -> Value {
    let adm = t.eps.admissibility(a.b_max);
    json!({
        "q": a.q, "delta": a.delta, "epsilon": t.eps.name(), "b_max": a.b_max,
        "classification": t.classification, "near_boundary": adm.near_boundary,
        "t_start": t.trajectory.samples[0].state[T_INDEX], "t_end": t.trajectory.last().state[T_INDEX],
    })
}

fn e2(c: &E2Cmd, cfg: &RunConfig) -> Result<Report, CliError> {
    let tol = cfg.tol.unwrap_or(1e-7);
    match c {
        E2Cmd::Integrate(a) => {
            let t = shoot(a)?;
            let region = t.monitor_max(monitors::REGION);
            let ratios = t.monitor_max(monitors::RATIO_BOUNDS);
            let verdicts = vec![
                Verdict::flag("case3", t.classification == Classification::Case3UnstableCurve),
                Verdict::at_most("lemma-identities", t.lemma_max(), tol),
                Verdict::at_most("invariant-region", region, 1e-8),
                Verdict::at_most("ratio-bounds", ratios, 1e-8),
                Verdict::at_least("reached-b-max", t.trajectory.last().state[1], a.b_max * (1.0 - 1e-9)),
            ];
            let mut worst: std::collections::HashMap<u64, f64> = std::collections::HashMap::new();
            for rec in &t.trajectory.monitor_log {
                let e = worst.entry(rec.t.to_bits()).or_insert(0.0);
                *e = e.max(rec.residual);
            }
            let mut table = Table::new(&["t", "a", "b", "c", "f", "r", "sigma", "monitor_max"]);
            for s in &t.trajectory.samples {
                let y = &s.state;
                let m = worst.get(&s.t.to_bits()).copied().unwrap_or(f64::NAN);
                table.push(&[y[T_INDEX], y[0], y[1], y[2], y[3], y[4], s.t, m]);
            }
            Ok(Report::new("e2 integrate", verdicts, shoot_data(a, &t), Some(table)))
        }
        E2Cmd::Verify { shoot: a, samples } => {
            let t = shoot(a)?;
            let rows: Vec<[f64; 5]> = residual_samples(&t, *samples)?
                .iter()
                .map(|r| [r.t, r.b, r.skew, r.identity3, r.ricci_disagreement])
                .collect();
            let col = |i: usize| max_abs(rows.iter().map(|r| r[i]));
            let mut verdicts = vec![
                Verdict::flag("case3", t.classification == Classification::Case3UnstableCurve),
                Verdict::at_most("skew-residual", col(2), tol),
                Verdict::at_most("identity3", col(3), 1e-8),
                Verdict::at_most("ricci-consistency", col(4), 1e-8),
                Verdict::at_most("lemma-identities", t.lemma_max(), tol),
            ];
            let dist = distance_profile(&t)?;
            if a.b_max >= 100.0 {
                verdicts.push(Verdict::at_most("backward-tail-length", dist.tail_below, 1e-5));
                verdicts.push(Verdict::at_least("forward-length-10-100", dist.length_10_100, 0.9 * dist.minorant));
                verdicts.push(Verdict::at_least("cubic-growth-k1", dist.k1, f64::MIN_POSITIVE));
            }
            let mut table = Table::new(&["t", "b", "skew_residual", "identity3", "ricci_disagreement"]);
            rows.iter().for_each(|r| table.push(r));
            let mut data = shoot_data(a, &t);
            data["distance"] = serde_json::to_value(&dist).unwrap_or(Value::Null);
            Ok(Report::new("e2 verify", verdicts, data, Some(table)))
        }
        E2Cmd::Bolt(a) => {
            let t = shoot(a)?;
            let b = bolt_smoothness(&t)?;
            let verdicts = vec![
                Verdict::near("db-dr", b.db_dr, 1.0, 1e-3),
                Verdict::near("db-dr-secant", b.db_dr_secant, 1.0, 1e-3),
                Verdict::at_most("quadratic-drift", b.quadratic_rel_change, 0.1),
                Verdict::at_most("cubic-drift-per-decade", b.cubic_drift_per_decade, 0.1),
            ];
            let mut table = Table::new(&["r", "cubic_ratio"]);
            for &(r, v) in &b.cubic {
                table.push(&[r, v]);
            }
            let mut data = shoot_data(a, &t);
            data["bolt"] = serde_json::to_value(&b).unwrap_or(Value::Null);
            Ok(Report::new("e2 bolt", verdicts, data, Some(table)))
        }
        E2Cmd::Classify { a, b, c, epsilon } => {
            let eps = parse_eps(epsilon, 1e3)?;
            let st = E2State { a: *a, b: *b, c: *c, f: 0.0, t: 0.0 };
            let solver = IvpSolver { abs_tol: 1e-14, rel_tol: 1e-11, ..Default::default() };
            let tr = classify_cauchy(&st, &eps, &solver)?;
            let mut verdicts = vec![Verdict::flag("sign-data-consistent", tr.sign_data_consistent(1e-9))];
            if let Some(bu) = &tr.blow_up {
                verdicts.push(Verdict::near("blow-up-exponent", bu.exponent, -0.5, 0.05));
            }
            let data = json!({
                "initial": st, "epsilon": eps.name(), "classification": tr.classification,
                "predicted": tr.predicted, "q": tr.q, "blow_up": tr.blow_up,
            });
            Ok(Report::new("e2 classify", verdicts, data, None))
        }
    }
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::usage(format!("bad grid `{s}`: use v1,v2,... or lo:hi:count"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if n < 1 {
            return Err(bad());
        }
        return Ok(if n == 1 { vec![lo] } else { linspace(lo, hi, n) });
    }
    s.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn frame_rows(fs: &FrameStructure, grid: &[f64]) -> Result<Vec<[f64; 10]>, CliError> {
    grid.par_iter()
        .map(|&s| -> Result<[f64; 10], CliError> {
            let p = fs.point(s)?;
            let c = check_point(&p);
            let (skew, killing, id3) = match &c.soliton {
                Some(r) => (r.skew, r.killing_max(), r.identity3),
                None => (f64::NAN, f64::NAN, f64::NAN),
            };
            Ok([
                s,
                c.kahler.rels2,
                c.kahler.two_block,
                c.kahler.three_block,
                c.integrability,
                c.jacobi,
                c.curvature.ricci_disagreement,
                skew,
                killing,
                id3,
            ])
        })
        .collect()
}

fn frame(c: &FrameCmd, cfg: &RunConfig) -> Result<Report, CliError> {
    let FrameCmd::Check { spec, tau_grid, geometry_only } = c;
    let tol = cfg.tol.unwrap_or(1e-8);
    let doc = FrameSpec::load(spec)?;
    let loaded = doc.build()?;
    let grid = match tau_grid {
        Some(g) => parse_grid(g)?,
        None => loaded.default_grid.clone(),
    };
    let rows = frame_rows(&loaded.frame, &grid)?;
    let col = |i: usize| max_abs(rows.iter().map(|r| r[i]));
    let mut verdicts = vec![
        Verdict::at_most("rels2", col(1), 1e-10),
        Verdict::at_most("closedness-two-block", col(2), 1e-10),
        Verdict::at_most("closedness-three-block", col(3), 1e-10),
        Verdict::at_most("integrability", col(4), 1e-10),
        Verdict::at_most("jacobi", col(5), 1e-10),
        Verdict::at_most("ricci-consistency", col(6), tol),
    ];
    if !geometry_only {
        verdicts.push(Verdict::at_most("soliton-skew", col(7), tol));
        // E(2) frames are skew-solitons only: J∇f is not Killing there.
        if loaded.frame.label == "e2" {
            verdicts.push(Verdict::at_least("killing-nonzero", col(8), tol));
        } else {
            verdicts.push(Verdict::at_most("killing", col(8), tol));
        }
        verdicts.push(Verdict::at_most("identity3", col(9), tol));
    }
    let mut table = Table::new(&[
        "s",
        "rels2",
        "closedness_two_block",
        "closedness_three_block",
        "integrability",
        "jacobi",
        "ricci_disagreement",
        "soliton_skew",
        "killing",
        "identity3",
    ]);
    rows.iter().for_each(|r| table.push(r));
    let data = json!({
        "spec": spec.display().to_string(),
        "label": loaded.frame.label,
        "coordinate": loaded.frame.coordinate,
        "n": loaded.frame.n,
        "lambda": loaded.frame.lambda,
        "grid": grid,
    });
    Ok(Report::new("frame check", verdicts, data, Some(table)))
}

fn steady_params(a: &SteadyArgs) -> Result<SteadyII, CliError> {
    let p = SteadyII::new(a.k, a.beta, a.k1, a.k2);
    p.validate()?;
    Ok(p)
}

/// `kβc′ + c′²/c³ − c″/c²` with central differences of the closed-form `c`,
/// relative to the largest term.
fn fd_ode_residual(p: &SteadyII, t: f64) -> f64 {
    let c = |x: f64| p.c_of_t(x).unwrap_or(f64::NAN);
    let h = 1e-4 * t.abs().max(1.0) / p.k1.abs().max(1.0);
    let (c0, c1, c2) = (c(t), fd_derivative(c, t, 1, h), fd_derivative(c, t, 2, h));
    let terms = [p.k * p.beta * c1, c1 * c1 / c0.powi(3), -c2 / (c0 * c0)];
    terms.iter().sum::<f64>().abs() / terms.iter().map(|v| v.abs()).fold(1.0, f64::max)
}

fn steady(c: &SteadyCmd, cfg: &RunConfig) -> Result<Report, CliError> {
    let tol = cfg.tol.unwrap_or(1e-8);
    match c {
        SteadyCmd::Eval { params, samples } => {
            let p = steady_params(params)?;
            let i = p.interval();
            let w = 1.0 / p.k1.abs();
            let n = (*samples).max(2);
            let grid = match (i.lo, i.hi) {
                (_, Some(h)) => linspace(h - 3.0 * w, h - 0.1 * w, n),
                (Some(l), None) => linspace(l + 0.1 * w, l + 3.0 * w, n),
                (None, None) => linspace(-2.0, 2.0, n),
            };
            let fs = p.frame();
            let mut t =
                Table::new(&["t", "c", "c_prime", "c_second", "ode_residual", "ode_residual_fd", "soliton_skew"]);
            let (mut fd_max, mut skew_max, mut exact_max) = (0.0f64, 0.0f64, 0.0f64);
            for &x in &grid {
                let [c0, c1, c2] = p.c_derivs(x)?;
                let exact = p.ode_residual(x)?;
                let fd = fd_ode_residual(&p, x);
                let r = point_soliton(&fs.point(x)?)?;
                let sk = r.skew + r.killing_max();
                fd_max = max_abs([fd_max, fd]);
                skew_max = max_abs([skew_max, sk]);
                exact_max = max_abs([exact_max, exact / c2.abs().max(1.0)]);
                t.push(&[x, c0, c1, c2, exact, fd, sk]);
            }
            let inc = p.incompleteness_verdict()?;
            let verdicts = vec![
                Verdict::at_most("ode-residual-fd", fd_max, 1e-6),
                Verdict::at_most("ode-residual", exact_max, tol),
                Verdict::at_most("soliton-residual", skew_max, tol),
                Verdict::flag("end-lengths-exact-vs-probe", inc.consistent),
            ];
            let data = json!({ "params": p, "interval": i, "incompleteness": inc });
            Ok(Report::new("steady eval", verdicts, data, Some(t)))
        }
        SteadyCmd::Length { params, t0, t1 } => {
            let p = steady_params(params)?;
            let rec = p.normal_geodesic_length(*t0, *t1)?;
            let verdicts =
                vec![Verdict::near("length-closed-form-vs-quadrature", rec.closed_form, rec.quadrature, 1e-6)];
            let inc = p.incompleteness_verdict()?;
            let data = json!({ "params": p, "interval": p.interval(), "length": rec, "incompleteness": inc });
            Ok(Report::new("steady length", verdicts, data, None))
        }
    }
}
