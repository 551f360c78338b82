//! Batch front-end for the `bidisk` library.
//!
//! Every subcommand renders its whole output as a string so that the binary
//! only decides where it goes (`--out` or stdout). Errors carry the stable
//! name of the underlying failure and map to exit code 2 (bad input) or 3
//! (numerical failure).

pub mod input;

use std::fmt::Write as _;
use std::path::PathBuf;

use bidisk::analysis::{
    classify_family, cyclicity_verdict, decay_scan_with_tol, fit_log_mode, fit_power, predicted_rate, DecaySeries,
    FitMode, FitWindow, RateFit, Verdict, VerdictConfig, MONOTONICITY_TOL,
};
use bidisk::approximants::{
    cesaro, diagonal_reduce_solve, residual_norm_sq, riesz_approximant, solve_optimal, BasisKind, BasisSpec,
    SolveOptions,
};
use bidisk::capacity::{annihilation_check, energy};
use bidisk::series::DEFAULT_EPS0;
use bidisk::spaces::norm2;
use bidisk::verify::{run_suite, SUITES};
use bidisk::{AlphaWeight, TwoVarSeries};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bidisk::Error),
    #[error("{0}")]
    Input(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),
    /// A property suite found violations; carries the rendered report.
    #[error("property violations found")]
    Failed(String),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Input(_) => "Input",
            CliError::Json(_) => "Json",
            CliError::Io(_) => "Io",
            CliError::Failed(_) => "PropertyViolation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input() => 3,
            CliError::Failed(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bidisk", version, about = "Optimal approximants and decay rates in Dirichlet-type spaces of the bidisk")]
pub struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a series in the space with parameter alpha.
    Norm {
        #[arg(long)]
        series: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// One approximant of order n, as JSON.
    Approx {
        #[arg(long)]
        series: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Residuals over a range of orders, as CSV `n,dist_sq,predicted,ratio`.
    Decay {
        #[arg(long)]
        series: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Largest order; shorthand for `--nmax`.
        #[arg(long, conflicts_with = "nmax")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        nmin: usize,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Worker threads (default: number of cores).
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Partial logarithmic energy of a measure, as JSON.
    Energy {
        #[arg(long)]
        measure: String,
        /// Fourier cutoff.
        #[arg(long = "K", alias = "k")]
        cutoff: usize,
    },
    /// Largest `|<z1^k z2^l f, C[mu]>|` over `k, l <= maxdeg`.
    Annihilate {
        #[arg(long)]
        series: String,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        maxdeg: usize,
        /// Fourier cutoff for builtin measures (default: maxdeg plus the degree of the series).
        #[arg(long = "K", alias = "k")]
        cutoff: Option<usize>,
    },
    /// Seeded randomized property suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rate fit and cyclicity verdict for a CSV with columns `n,dist_sq`.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FitChoice::Auto)]
        mode: FitChoice,
        /// Smallest order in the fit window.
        #[arg(long, default_value_t = 10)]
        nmin: usize,
        #[arg(long)]
        nmax: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Optimal,
    Riesz,
    Cesaro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitChoice {
    Power,
    Log,
    /// Both fits; the one with the higher r_squared is reported.
    Auto,
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    /// `full`, `onevar` or `diag:M,N`.
    #[arg(long, default_value = "full")]
    pub basis: String,
    #[arg(long, value_enum, default_value_t = Method::Optimal)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Orthogonality certificate bound, relative to `||f||^2`.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_ortho: f64,
    /// Ridge added on factorization failure, relative to `trace(G) / dim`.
    #[arg(long, default_value_t = 1e-12)]
    pub tol_ridge: f64,
    /// Smallest admissible `|f(0,0)|` for reciprocals.
    #[arg(long, default_value_t = DEFAULT_EPS0)]
    pub tol_eps0: f64,
    /// Allowed increase of `dist_sq` between consecutive orders.
    #[arg(long, default_value_t = MONOTONICITY_TOL)]
    pub tol_monotone: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_unknowns: usize,
    /// Fail instead of retrying with a ridge.
    #[arg(long)]
    pub no_regularize: bool,
}

impl TolArgs {
    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            max_unknowns: self.max_unknowns,
            ortho_tol: self.tol_ortho,
            ridge_factor: self.tol_ridge,
            regularize: !self.no_regularize,
        }
    }
}

fn weight(alpha: f64) -> Result<AlphaWeight, CliError> {
    Ok(AlphaWeight::new(alpha)?)
}

/// Basis and method after compatibility checks; the explicit means live on the full grid.
fn resolve(method: &MethodArgs) -> Result<(Method, BasisKind), CliError> {
    let basis = input::parse_basis(&method.basis)?;
    if method.method != Method::Optimal && basis != BasisKind::Full {
        return Err(CliError::Input(format!(
            "method {:?} produces full-grid polynomials; use --basis full",
            method.method
        )));
    }
    Ok((method.method, basis))
}

#[derive(Serialize)]
struct ApproxReport {
    method: String,
    basis: String,
    n: usize,
    alpha: f64,
    /// Nonzero coefficients as `[k, l, re, im]`.
    coefficients: Vec<(usize, usize, f64, f64)>,
    residual_sq: f64,
    cond_estimate: Option<f64>,
    ortho_residual: Option<f64>,
    regularized: Option<bool>,
}

fn explicit_mean(method: Method, f: &TwoVarSeries, a: AlphaWeight, n: usize, eps0: f64) -> Result<TwoVarSeries, CliError> {
    Ok(match method {
        Method::Riesz => riesz_approximant(f, a, n, eps0)?,
        _ => cesaro(f, n, eps0)?,
    })
}

fn cmd_approx(series: &str, alpha: f64, n: usize, method: &MethodArgs, tol: &TolArgs) -> Result<String, CliError> {
    let f = input::parse_series(series)?;
    let a = weight(alpha)?;
    let (method, basis) = resolve(method)?;
    let opts = tol.solve_options();
    let (p, residual_sq, diagnostics) = if method == Method::Optimal {
        let r = match basis {
            BasisKind::Diagonal(pat) => diagonal_reduce_solve(&f, a, n, pat, &opts)?,
            _ => solve_optimal(&f, a, &BasisSpec::new(n, basis), &opts)?,
        };
        (r.p, r.residual_sq, Some((r.cond_estimate, r.ortho_residual, r.regularized)))
    } else {
        let p = explicit_mean(method, &f, a, n, tol.tol_eps0)?;
        let residual = residual_norm_sq(&p, &f, a)?;
        (p, residual, None)
    };
    let report = ApproxReport {
        method: format!("{method:?}").to_lowercase(),
        basis: basis.to_string(),
        n,
        alpha,
        coefficients: p.support().map(|(k, l, c)| (k, l, c.re, c.im)).collect(),
        residual_sq,
        cond_estimate: diagnostics.map(|d| d.0),
        ortho_residual: diagnostics.map(|d| d.1),
        regularized: diagnostics.map(|d| d.2),
    };
    Ok(serde_json::to_string(&report)? + "\n")
}

#[allow(clippy::too_many_arguments)]
fn cmd_decay(
    series: &str,
    alpha: f64,
    n: Option<usize>,
    nmin: usize,
    nmax: Option<usize>,
    step: usize,
    workers: Option<usize>,
    method: &MethodArgs,
    tol: &TolArgs,
) -> Result<String, CliError> {
    let f = input::parse_series(series)?;
    let a = weight(alpha)?;
    let (method, basis) = resolve(method)?;
    let nmax = n.or(nmax).ok_or_else(|| CliError::Input("decay needs --nmax or --n".into()))?;
    if step == 0 {
        return Err(CliError::Input("--step must be at least 1".into()));
    }
    if nmin > nmax {
        return Err(CliError::Input(format!("--nmin {nmin} exceeds --nmax {nmax}")));
    }
    let orders: Vec<usize> = (nmin..=nmax).step_by(step).collect();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(CliError::Input("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| CliError::Input(format!("cannot start workers: {e}")))?;
    let opts = tol.solve_options();
    let values: Vec<f64> = pool.install(|| -> Result<Vec<f64>, CliError> {
        if method == Method::Optimal {
            let ds = decay_scan_with_tol(&f, a, &orders, basis, &opts, tol.tol_monotone)?;
            Ok(ds.dist_sq())
        } else {
            orders
                .par_iter()
                .map(|&n| {
                    let p = explicit_mean(method, &f, a, n, tol.tol_eps0)?;
                    Ok(residual_norm_sq(&p, &f, a)?)
                })
                .collect()
        }
    })?;

    let theory = classify_family(&f).and_then(|family| predicted_rate(alpha, family).ok());
    let mut csv = String::from("n,dist_sq,predicted,ratio\n");
    for (&n, &d) in orders.iter().zip(&values) {
        let predicted = theory.and_then(|t| t.gauge(n));
        let (p, r) = match predicted {
            Some(p) => (p.to_string(), (d / p).to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(csv, "{n},{d},{p},{r}").expect("writing to a String");
    }
    Ok(csv)
}

#[derive(Serialize)]
struct EnergyJson {
    cutoff: usize,
    partial: f64,
    axis_z1: f64,
    axis_z2: f64,
    interior: f64,
}

fn cmd_energy(measure: &str, cutoff: usize) -> Result<String, CliError> {
    let mu = input::parse_measure(measure, cutoff)?;
    let r = energy(&mu, cutoff)?;
    let json = EnergyJson {
        cutoff: r.cutoff,
        partial: r.partial,
        axis_z1: r.axis_z1,
        axis_z2: r.axis_z2,
        interior: r.interior,
    };
    Ok(serde_json::to_string_pretty(&json)? + "\n")
}

fn cmd_annihilate(series: &str, measure: &str, maxdeg: usize, cutoff: Option<usize>) -> Result<String, CliError> {
    let f = input::parse_series(series)?;
    let cutoff = cutoff.unwrap_or(maxdeg + f.deg1().max(f.deg2()));
    let mu = input::parse_measure(measure, cutoff)?;
    Ok(format!("{}\n", annihilation_check(&f, &mu, maxdeg)?))
}

fn cmd_verify(suite: &str, trials: usize, seed: u64) -> Result<String, CliError> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut text = String::new();
    let mut failed = false;
    for name in names {
        let report = run_suite(name, trials, seed)?;
        failed |= !report.passed();
        writeln!(
            text,
            "{} {}: {} checks, {} failures, worst margin {:e}",
            if report.passed() { "PASS" } else { "FAIL" },
            report.suite,
            report.checks,
            report.failures.len(),
            report.worst_margin
        )
        .expect("writing to a String");
        for failure in report.failures.iter().take(5) {
            writeln!(text, "  trial {}: {}", failure.trial, failure.detail).expect("writing to a String");
        }
    }
    if failed {
        Err(CliError::Failed(text))
    } else {
        Ok(text)
    }
}

/// Reads `n,dist_sq` from the first two columns; a non-numeric first line is a header.
fn read_decay_csv(path: &PathBuf) -> Result<DecaySeries, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let n = fields.next().unwrap_or("").trim();
        let d = fields.next().unwrap_or("").trim();
        match (n.parse::<usize>(), d.parse::<f64>()) {
            (Ok(n), Ok(d)) => points.push((n, d)),
            _ if i == 0 => continue,
            _ => return Err(CliError::Input(format!("line {}: expected n,dist_sq, got {line:?}", i + 1))),
        }
    }
    Ok(DecaySeries::from_points(points)?)
}

#[derive(Serialize)]
struct FitJson {
    mode: &'static str,
    exponent: f64,
    constant: f64,
    r_squared: f64,
    fit_range: (usize, usize),
}

impl From<&RateFit> for FitJson {
    fn from(f: &RateFit) -> Self {
        Self {
            mode: match f.mode {
                FitMode::Power => "power",
                FitMode::Logarithmic => "logarithmic",
            },
            exponent: f.exponent,
            constant: f.constant,
            r_squared: f.r_squared,
            fit_range: f.fit_range,
        }
    }
}

#[derive(Serialize)]
struct FitReport {
    fit: FitJson,
    /// `decaying`, `plateau` or `inconclusive`; absent when the scan is too short for a verdict.
    verdict: Option<&'static str>,
    exact_inversion: Option<bool>,
}

fn cmd_fit(path: &PathBuf, mode: FitChoice, nmin: usize, nmax: Option<usize>) -> Result<String, CliError> {
    let ds = read_decay_csv(path)?;
    let window = FitWindow::new(nmin, nmax.unwrap_or(usize::MAX));
    let fit = match mode {
        FitChoice::Power => fit_power(&ds, window)?,
        FitChoice::Log => fit_log_mode(&ds, window)?,
        FitChoice::Auto => {
            let power = fit_power(&ds, window)?;
            match fit_log_mode(&ds, window) {
                Ok(log) if log.r_squared > power.r_squared => log,
                _ => power,
            }
        }
    };
    let cfg = VerdictConfig {
        window,
        ..VerdictConfig::default()
    };
    let verdict = cyclicity_verdict(&ds, &cfg).ok();
    let report = FitReport {
        fit: FitJson::from(&fit),
        verdict: verdict.as_ref().map(|v| match v.verdict {
            Verdict::Decaying => "decaying",
            Verdict::Plateau => "plateau",
            Verdict::Inconclusive => "inconclusive",
        }),
        exact_inversion: verdict.map(|v| v.exact_inversion),
    };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

/// Runs one subcommand and returns its rendered output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Norm { series, alpha } => {
            let f = input::parse_series(series)?;
            Ok(format!("{}\n", norm2(&f, weight(*alpha)?)))
        }
        Command::Approx {
            series,
            alpha,
            n,
            method,
            tol,
        } => cmd_approx(series, *alpha, *n, method, tol),
        Command::Decay {
            series,
            alpha,
            n,
            nmin,
            nmax,
            step,
            workers,
            method,
            tol,
        } => cmd_decay(series, *alpha, *n, *nmin, *nmax, *step, *workers, method, tol),
        Command::Energy { measure, cutoff } => cmd_energy(measure, *cutoff),
        Command::Annihilate {
            series,
            measure,
            maxdeg,
            cutoff,
        } => cmd_annihilate(series, measure, *maxdeg, *cutoff),
        Command::Verify { suite, trials, seed } => cmd_verify(suite, *trials, *seed),
        Command::Fit { input, mode, nmin, nmax } => cmd_fit(input, *mode, *nmin, *nmax),
    }
}
