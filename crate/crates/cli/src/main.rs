//! `annulus`: evaluate Green and Robin functions on an annulus, solve for the
//! two-point blow-up radius, search for critical configurations and run the
//! validation oracles. Every command prints one JSON document
//! `{manifest, result}`.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use annulus_core::green::{grad_green_x, grad_robin, green, robin};
use annulus_core::oracle::{run_suite, Suite};
use annulus_core::solver::{
    find_critical_points, profile, r0_bracket, solve_r0, ProfilePoint, SearchOptions,
};
use annulus_core::{Annulus, GradientValue, PolarPoint, SeriesControl, SeriesPolicy};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_INPUT: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "annulus",
    version,
    about = "Green functions and blow-up points on a planar annulus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Geometry {
    /// Inner radius.
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Outer radius.
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Absolute tail tolerance for every series.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point or pair of points.
    Eval {
        #[command(flatten)]
        geometry: Geometry,
        /// First argument of the Green function, as "r,theta".
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: Option<(f64, f64)>,
        /// Pole of the Green function, or the point for the Robin function.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        y: (f64, f64),
        #[arg(long, value_enum)]
        what: Quantity,
    },
    /// Solve for the radius of the antipodal two-point configuration.
    R0 {
        #[command(flatten)]
        geometry: Geometry,
        /// Also write the f and g profiles to this CSV file.
        #[arg(long)]
        profile_csv: Option<PathBuf>,
        /// Number of evenly spaced profile radii.
        #[arg(long, default_value_t = 200)]
        n_grid: usize,
    },
    /// Multi-start search for critical configurations.
    Solve {
        #[command(flatten)]
        geometry: Geometry,
        /// Number of points per configuration.
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 20)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Iteration cap per start.
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        /// Write the JSON document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run oracle checks against the series implementation.
    Validate {
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Quantity {
    Green,
    Robin,
    GradGreen,
    GradRobin,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Green,
    Gradients,
    Poisson,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Green => Suite::Green,
            SuiteArg::Gradients => Suite::Gradients,
            SuiteArg::Poisson => Suite::Poisson,
            SuiteArg::All => Suite::All,
        }
    }
}

/// A flag combination the library cannot see, such as a missing `--x`.
#[derive(Debug)]
struct UsageError(&'static str);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.0)
    }
}

impl std::error::Error for UsageError {}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (r, t) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"r,theta\", got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(r)?, parse(t)?))
}

#[derive(Serialize)]
struct Manifest {
    command: &'static str,
    annulus: Annulus,
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    timestamp: String,
    version: &'static str,
}

impl Manifest {
    fn new(command: &'static str, annulus: Annulus, tol: f64, seed: Option<u64>) -> Self {
        Self {
            command,
            annulus,
            tol,
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    manifest: &'a Manifest,
    result: &'a T,
}

fn emit<T: Serialize>(manifest: &Manifest, result: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&Document { manifest, result })?;
    text.push('\n');
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Gradient {
    x1: f64,
    x2: f64,
    radial: f64,
    tangential: f64,
}

impl From<GradientValue> for Gradient {
    fn from(g: GradientValue) -> Self {
        Self {
            x1: g.vector.x1,
            x2: g.vector.x2,
            radial: g.radial_part,
            tangential: g.tangential_part,
        }
    }
}

#[derive(Serialize)]
struct EvalRecord {
    what: Quantity,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<PolarPoint>,
    y: PolarPoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gradient: Option<Gradient>,
    m_used: usize,
    tail_bound: f64,
    q: f64,
}

fn annulus(g: &Geometry) -> Result<(Annulus, SeriesPolicy)> {
    Ok((Annulus::new(g.a, g.b)?, SeriesPolicy::new(g.tol)?))
}

fn cmd_eval(
    geometry: Geometry,
    x: Option<(f64, f64)>,
    y: (f64, f64),
    what: Quantity,
) -> Result<u8> {
    let (ann, policy) = annulus(&geometry)?;
    let y = PolarPoint::new(y.0, y.1)?;
    let x = x.map(|(r, t)| PolarPoint::new(r, t)).transpose()?;
    let pair = || -> Result<(PolarPoint, SeriesControl)> {
        let x = x.ok_or(UsageError(
            "--x is required for --what green and grad-green",
        ))?;
        Ok((x, SeriesControl::for_radii(&ann, &[x.r, y.r], policy)?))
    };
    let single = || SeriesControl::for_radii(&ann, &[y.r], policy);
    let (value, gradient, ctrl) = match what {
        Quantity::Green => {
            let (x, c) = pair()?;
            (Some(green(&ann, &x, &y, &c)?), None, c)
        }
        Quantity::GradGreen => {
            let (x, c) = pair()?;
            (None, Some(grad_green_x(&ann, &x, &y, &c)?.into()), c)
        }
        Quantity::Robin => {
            let c = single()?;
            (Some(robin(&ann, &y, &c)?), None, c)
        }
        Quantity::GradRobin => {
            let c = single()?;
            (None, Some(grad_robin(&ann, &y, &c)?.into()), c)
        }
    };
    let record = EvalRecord {
        what,
        x: if matches!(what, Quantity::Green | Quantity::GradGreen) {
            x
        } else {
            None
        },
        y,
        value,
        gradient,
        m_used: ctrl.m_used,
        tail_bound: ctrl.tail_bound,
        q: ctrl.q,
    };
    emit(
        &Manifest::new("eval", ann, geometry.tol, None),
        &record,
        None,
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct R0Record {
    r0: f64,
    residual: f64,
    bracket: [f64; 2],
    enclosure: [f64; 2],
    iterations: usize,
    m_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile_csv: Option<String>,
}

/// `n` evenly spaced radii on `[a + ε, b - ε]`, plus both bracket ends so
/// the zeros of `f` and `g` appear exactly.
fn profile_radii(ann: &Annulus, n: usize) -> Vec<f64> {
    let eps = 1e-6 * ann.width();
    let (lo, hi) = (ann.a() + eps, ann.b() - eps);
    let (left, right) = r0_bracket(ann);
    let mut radii: Vec<f64> = match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    };
    radii.extend([left, right]);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

fn write_profile(ann: &Annulus, policy: SeriesPolicy, n: usize, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = csv::Writer::from_writer(file);
    for r in profile_radii(ann, n) {
        let ctrl = SeriesControl::for_radii(ann, &[r], policy)?;
        let row: ProfilePoint = profile(ann, r, &ctrl)?;
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_r0(geometry: Geometry, csv_path: Option<PathBuf>, n_grid: usize) -> Result<u8> {
    let (ann, policy) = annulus(&geometry)?;
    let sol = solve_r0(&ann, geometry.tol)?;
    if let Some(path) = &csv_path {
        write_profile(&ann, policy, n_grid, path)?;
    }
    let record = R0Record {
        r0: sol.r0,
        residual: sol.residual,
        bracket: sol.bracket,
        enclosure: sol.enclosure,
        iterations: sol.iterations,
        m_used: sol.m_used,
        profile_csv: csv_path.map(|p| p.display().to_string()),
    };
    emit(&Manifest::new("r0", ann, geometry.tol, None), &record, None)?;
    Ok(0)
}

fn cmd_solve(
    geometry: Geometry,
    points: usize,
    starts: usize,
    seed: u64,
    max_iter: usize,
    out: Option<PathBuf>,
) -> Result<u8> {
    let (ann, _) = annulus(&geometry)?;
    let opts = SearchOptions {
        seed,
        max_iter,
        series_tol: geometry.tol,
        ..SearchOptions::default()
    };
    let reports = find_critical_points(&ann, points, starts, &opts)?;
    emit(
        &Manifest::new("solve", ann, geometry.tol, Some(seed)),
        &reports,
        out.as_deref(),
    )?;
    let converged = reports.iter().filter(|r| r.converged).count();
    if converged == 0 {
        eprintln!("annulus: none of the {starts} starts converged");
        return Ok(EXIT_NO_CONVERGENCE);
    }
    Ok(0)
}

fn cmd_validate(geometry: Geometry, suite: SuiteArg) -> Result<u8> {
    let (ann, _) = annulus(&geometry)?;
    let summary = run_suite(&ann, suite.into(), geometry.tol)?;
    emit(
        &Manifest::new("validate", ann, geometry.tol, None),
        &summary,
        None,
    )?;
    if !summary.passed {
        for c in summary.checks.iter().filter(|c| !c.passed) {
            eprintln!(
                "annulus: check {}/{} failed: {} against {}",
                c.suite, c.name, c.value, c.threshold
            );
        }
        return Ok(EXIT_VALIDATION);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval {
            geometry,
            x,
            y,
            what,
        } => cmd_eval(geometry, x, y, what),
        Command::R0 {
            geometry,
            profile_csv,
            n_grid,
        } => cmd_r0(geometry, profile_csv, n_grid),
        Command::Solve {
            geometry,
            points,
            starts,
            seed,
            max_iter,
            out,
        } => cmd_solve(geometry, points, starts, seed, max_iter, out),
        Command::Validate { geometry, suite } => cmd_validate(geometry, suite),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("annulus: {err:#}");
            let input = err.downcast_ref::<annulus_core::Error>().is_some()
                || err.downcast_ref::<UsageError>().is_some();
            ExitCode::from(if input { EXIT_INPUT } else { 1 })
        }
    }
}
