//! Command-line front end.
//!
//! Exit status: 0 on success, 2 for invalid input (configuration, shock data,
//! frequency), 3 when a solver fails. Diagnostics go to standard error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::beta::{
    beta_convergence_study, compute_beta, run_beta, BetaOptions, BetaResult, BETA_TAIL_TOL,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::io::{
    fmt_f64, profile_table, solution_table, write_beta_summary, write_json, write_table,
    ytilde_table, BetaRecord,
};
use crate::model::{FluxKind, ShockConfig};
use crate::profile::{exact_burgers_profile, solve_profile_with, Grid, ProfileOptions, TAIL_TOL};
use crate::ytilde::{continuation_scan, exact_ytilde, CoupledOptions, Method};

#[derive(Debug, Parser)]
#[command(
    name = "shockbeta",
    version,
    about = "Refined stability coefficient of planar viscous shocks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Viscous profile on [-L, L].
    Profile {
        #[command(flatten)]
        run: RunArgs,
        /// Write the closed-form Burgers profile instead of integrating.
        #[arg(long)]
        exact: bool,
    },
    /// ytilde = w + i v by each requested method.
    Ytilde {
        #[command(flatten)]
        run: RunArgs,
    },
    /// beta for every half-width and method, with a summary table.
    Beta {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Continuation in u- with the coupled method.
    Scan {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Error norms against the closed-form example.
    Compare {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML run configuration; flags override its values.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// burgers | quadratic_transverse | sine_transverse | polynomial
    #[arg(long)]
    pub flux: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub frequency: Option<f64>,
    /// f1 coefficients, lowest degree first (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub f1: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub f2: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub u_minus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u_plus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau0: Option<f64>,
    /// Half-width L of the domain.
    #[arg(short = 'L', long)]
    pub half_width: Option<f64>,
    /// Number of grid intervals N (even).
    #[arg(short = 'N', long)]
    pub intervals: Option<usize>,
    /// Half-widths for the beta table (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub half_widths: Option<Vec<f64>>,
    /// if | coupled | both
    #[arg(long)]
    pub method: Option<String>,
    /// trapezoid | simpson
    #[arg(long)]
    pub quadrature: Option<String>,
    #[arg(long)]
    pub tail_tol: Option<f64>,
    #[arg(short, long)]
    pub output_dir: Option<PathBuf>,
    /// u- values for scan (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub continuation: Option<Vec<f64>>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let mut over = RunConfig {
            u_minus: self.u_minus,
            u_plus: self.u_plus,
            xi0: self.xi0,
            tau0: self.tau0,
            half_width: self.half_width,
            intervals: self.intervals,
            half_widths: self.half_widths.clone(),
            method: self.method.clone(),
            quadrature: self.quadrature.clone(),
            tail_tol: self.tail_tol,
            output_dir: self.output_dir.clone(),
            continuation: self.continuation.clone(),
            ..Default::default()
        };
        over.flux.kind = self.flux.clone();
        over.flux.frequency = self.frequency;
        over.flux.f1 = self.f1.clone();
        over.flux.f2 = self.f2.clone();
        Ok(base.merged(over))
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn grid_of(conf: &RunConfig) -> Result<Grid> {
    Grid::new(conf.half_width(), conf.intervals())
}

fn beta_options(conf: &RunConfig) -> Result<BetaOptions> {
    Ok(BetaOptions {
        quadrature: conf.quadrature_rule()?,
        tail_tol: conf.tail_tol_or(BETA_TAIL_TOL)?,
        ..Default::default()
    })
}

fn is_burgers_pair(cfg: &ShockConfig) -> bool {
    cfg.flux.kind != FluxKind::Custom && cfg.u_minus == 1.0 && cfg.u_plus == -1.0
}

pub fn cmd_profile(conf: &RunConfig, exact: bool) -> Result<PathBuf> {
    let cfg = conf.shock()?;
    let grid = grid_of(conf)?;
    let profile = if exact {
        if !is_burgers_pair(&cfg) {
            return Err(Error::Config(
                "the exact profile exists only for Burgers with u_minus = 1, u_plus = -1".into(),
            ));
        }
        exact_burgers_profile(&grid)
    } else {
        let opts = ProfileOptions {
            tail_tol: conf.tail_tol_or(TAIL_TOL)?,
            ..Default::default()
        };
        solve_profile_with(&cfg, &grid, &opts)?
    };
    let dir = conf.output_dir();
    prepare_dir(&dir)?;
    let path = dir.join("profile.csv");
    write_table(&path, &profile_table(&profile, &conf.describe(&cfg)))?;
    println!("wrote {}", path.display());
    Ok(path)
}

#[derive(Debug, Serialize)]
struct YtildeEntry {
    method: String,
    decay_residual: f64,
    origin_residual: f64,
    newton_iters: Option<usize>,
    bvp_residual: Option<f64>,
    mesh_points: Option<usize>,
    quadrature_estimate: Option<f64>,
    file: String,
}

pub fn cmd_ytilde(conf: &RunConfig) -> Result<Vec<PathBuf>> {
    let cfg = conf.shock()?;
    let freq = conf.frequency(&cfg)?;
    let grid = grid_of(conf)?;
    let opts = beta_options(conf)?;
    let dir = conf.output_dir();
    prepare_dir(&dir)?;
    let mut written = Vec::new();
    let mut entries = Vec::new();
    for method in conf.methods()? {
        let run = run_beta(&cfg, &freq, &grid, method, &opts)?;
        let name = format!("ytilde_{}.csv", method.as_str());
        let path = dir.join(&name);
        write_table(
            &path,
            &ytilde_table(&run.ytilde, 0.0, 0.0, &conf.describe(&cfg)),
        )?;
        println!("wrote {}", path.display());
        entries.push(YtildeEntry {
            method: method.as_str().into(),
            decay_residual: run.ytilde.decay_residual(),
            origin_residual: run.ytilde.origin_residual(),
            newton_iters: run.coupled.map(|d| d.newton_iters),
            bvp_residual: run.coupled.map(|d| d.residual_norm),
            mesh_points: run.coupled.map(|d| d.mesh_points),
            quadrature_estimate: run.quadrature_estimate,
            file: name,
        });
        written.push(path);
    }
    write_json(&dir.join("ytilde_manifest.json"), &entries)?;
    Ok(written)
}

#[derive(Debug, Serialize)]
struct BetaRow {
    method: String,
    half_width: f64,
    status: String,
    result: Option<BetaRecord>,
    newton_iters: Option<usize>,
    quadrature_estimate: Option<f64>,
    file: Option<String>,
}

#[derive(Debug, Serialize)]
struct BetaManifest {
    flux: String,
    u_minus: f64,
    u_plus: f64,
    s: f64,
    tau0: f64,
    xi0: f64,
    sign_stable: Vec<(String, bool)>,
    rows: Vec<BetaRow>,
}

fn label(l: f64) -> String {
    format!("{l}").replace('.', "p")
}

pub fn cmd_beta(conf: &RunConfig) -> Result<Vec<(Method, Vec<Option<BetaResult>>)>> {
    let cfg = conf.shock()?;
    let freq = conf.frequency(&cfg)?;
    let opts = beta_options(conf)?;
    let half_widths = conf.half_widths();
    for &l in &half_widths {
        Grid::new(l, 2)?;
    }
    let density = conf.density();
    let dir = conf.output_dir();
    prepare_dir(&dir)?;

    let mut table = Vec::new();
    let mut rows = Vec::new();
    let mut stable = Vec::new();
    let mut first_failure = None;
    for method in conf.methods()? {
        let study = beta_convergence_study(&cfg, &freq, &half_widths, density, method, &opts);
        stable.push((method.as_str().to_string(), study.sign_stable()));
        let mut cells = Vec::new();
        for row in study.rows {
            match row.outcome {
                Ok(run) => {
                    let name = format!("ytilde_{}_L{}.csv", method.as_str(), label(row.half_width));
                    write_table(
                        &dir.join(&name),
                        &ytilde_table(&run.ytilde, 0.0, 0.0, &conf.describe(&cfg)),
                    )?;
                    rows.push(BetaRow {
                        method: method.as_str().into(),
                        half_width: row.half_width,
                        status: "ok".into(),
                        result: Some(BetaRecord::from(&run.result)),
                        newton_iters: run.coupled.map(|d| d.newton_iters),
                        quadrature_estimate: run.quadrature_estimate,
                        file: Some(name),
                    });
                    cells.push(Some(run.result));
                }
                Err(e) => {
                    eprintln!("{} L={}: {e}", method.as_str(), row.half_width);
                    rows.push(BetaRow {
                        method: method.as_str().into(),
                        half_width: row.half_width,
                        status: e.to_string(),
                        result: None,
                        newton_iters: None,
                        quadrature_estimate: None,
                        file: None,
                    });
                    cells.push(None);
                    first_failure.get_or_insert(e);
                }
            }
        }
        table.push((method, cells));
    }
    write_beta_summary(&dir.join("beta_summary.csv"), &half_widths, &table)?;
    write_json(
        &dir.join("beta_manifest.json"),
        &BetaManifest {
            flux: cfg.flux.kind.as_str().into(),
            u_minus: cfg.u_minus,
            u_plus: cfg.u_plus,
            s: cfg.s,
            tau0: freq.tau0,
            xi0: freq.xi0,
            sign_stable: stable,
            rows,
        },
    )?;
    print_beta_table(&half_widths, &table);
    match first_failure {
        Some(e) => Err(e),
        None => Ok(table),
    }
}

fn print_beta_table(half_widths: &[f64], table: &[(Method, Vec<Option<BetaResult>>)]) {
    print!("{:<10}", "method");
    for l in half_widths {
        print!("{:>24}", format!("L={l}"));
    }
    println!();
    for (m, cells) in table {
        print!("{:<10}", m.as_str());
        for c in cells {
            let s = match c {
                Some(r) => format!("{:.4}{:+.4}i ({:+})", r.beta.re, r.beta.im, r.sign_re_beta),
                None => "failed".into(),
            };
            print!("{s:>24}");
        }
        println!();
    }
}

#[derive(Debug, Serialize)]
struct ScanEntry {
    index: usize,
    u_minus: f64,
    s: f64,
    tau0: f64,
    xi0: f64,
    newton_iters: usize,
    bvp_residual: f64,
    mesh_points: usize,
    beta: BetaRecord,
    file: String,
}

#[derive(Debug, Serialize)]
struct StallRecord {
    index: usize,
    u_minus: f64,
    message: String,
}

#[derive(Debug, Serialize)]
struct ScanManifest {
    flux: String,
    u_plus: f64,
    xi0: f64,
    requested: Vec<f64>,
    points: Vec<ScanEntry>,
    stall: Option<StallRecord>,
}

pub fn cmd_scan(conf: &RunConfig) -> Result<usize> {
    let values = conf
        .continuation
        .clone()
        .filter(|v| !v.is_empty())
        .ok_or_else(|| Error::Config("scan needs a non-empty `continuation` list".into()))?;
    if conf.tau0.is_some() {
        return Err(Error::Config(
            "tau0 is recomputed at every scan point; do not set it".into(),
        ));
    }
    let flux = conf.flux_model()?;
    let u_plus = conf.u_plus()?;
    let xi0 = conf.xi0.unwrap_or(1.0);
    let grid = grid_of(conf)?;
    let rule = conf.quadrature_rule()?;
    let copts = CoupledOptions {
        tail_tol: conf.tail_tol_or(TAIL_TOL)?,
        ..Default::default()
    };
    let dir = conf.output_dir();
    prepare_dir(&dir)?;

    let outcome = continuation_scan(&flux, u_plus, xi0, &values, &grid, &copts);
    let mut entries = Vec::new();
    for (index, p) in outcome.points.iter().enumerate() {
        let sol = &p.solution;
        let beta = compute_beta(&p.cfg, &p.freq, &sol.profile, &sol.ytilde, rule)?;
        let name = format!("scan_point_{index}.csv");
        let mut meta = conf.describe(&p.cfg);
        meta.push(("beta_re".into(), fmt_f64(beta.beta.re)));
        meta.push(("beta_im".into(), fmt_f64(beta.beta.im)));
        write_table(
            &dir.join(&name),
            &solution_table(&sol.profile, &sol.ytilde, &meta)?,
        )?;
        println!(
            "u- = {:<6} beta = {:.6}{:+.6}i  sign {:+}",
            p.u_minus, beta.beta.re, beta.beta.im, beta.sign_re_beta
        );
        entries.push(ScanEntry {
            index,
            u_minus: p.u_minus,
            s: p.cfg.s,
            tau0: p.freq.tau0,
            xi0: p.freq.xi0,
            newton_iters: sol.diagnostics.newton_iters,
            bvp_residual: sol.diagnostics.residual_norm,
            mesh_points: sol.diagnostics.mesh_points,
            beta: BetaRecord::from(&beta),
            file: name,
        });
    }
    let stall = match &outcome.stall {
        Some(Error::ContinuationStalled {
            index,
            u_minus,
            source,
        }) => Some(StallRecord {
            index: *index,
            u_minus: *u_minus,
            message: source.to_string(),
        }),
        _ => None,
    };
    write_json(
        &dir.join("scan_manifest.json"),
        &ScanManifest {
            flux: flux.kind.as_str().into(),
            u_plus,
            xi0,
            requested: values,
            points: entries,
            stall,
        },
    )?;
    match outcome.stall {
        Some(e) => Err(e),
        None => Ok(outcome.points.len()),
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorNorms {
    pub method: String,
    pub ubar: f64,
    pub w: f64,
    pub v: f64,
    /// Same norms multiplied by `sqrt(h)`.
    pub ubar_weighted: f64,
    pub w_weighted: f64,
    pub v_weighted: f64,
}

/// `sqrt(sum (a_j - b_j)^2)` over shared nodes.
pub fn norm2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

pub fn cmd_compare(conf: &RunConfig) -> Result<Vec<ErrorNorms>> {
    let cfg = conf.shock()?;
    if !cfg.flux.has_exact_solution(cfg.u_minus, cfg.u_plus) {
        return Err(Error::Config(format!(
            "no closed-form solution for flux `{}` with u- = {}, u+ = {}",
            cfg.flux.kind, cfg.u_minus, cfg.u_plus
        )));
    }
    let freq = conf.frequency(&cfg)?;
    let grid = grid_of(conf)?;
    let opts = beta_options(conf)?;
    let exact_u = exact_burgers_profile(&grid);
    let exact_y = exact_ytilde(&grid, freq);
    let sh = grid.step().sqrt();
    let mut report = Vec::new();
    for method in conf.methods()? {
        let run = run_beta(&cfg, &freq, &grid, method, &opts)?;
        let (u, w, v) = (
            norm2_diff(&run.profile.ubar, &exact_u.ubar),
            norm2_diff(&run.ytilde.w, &exact_y.w),
            norm2_diff(&run.ytilde.v, &exact_y.v),
        );
        report.push(ErrorNorms {
            method: method.as_str().into(),
            ubar: u,
            w,
            v,
            ubar_weighted: sh * u,
            w_weighted: sh * w,
            v_weighted: sh * v,
        });
    }
    println!(
        "2-norm errors on {} nodes (L = {}):",
        grid.len(),
        grid.half_width()
    );
    println!("{:<10}{:>14}{:>14}{:>14}", "method", "ubar", "w", "v");
    for r in &report {
        println!(
            "{:<10}{:>14.5e}{:>14.5e}{:>14.5e}",
            r.method, r.ubar, r.w, r.v
        );
    }
    println!("h-weighted (sqrt(h) * 2-norm):");
    for r in &report {
        println!(
            "{:<10}{:>14.5e}{:>14.5e}{:>14.5e}",
            r.method, r.ubar_weighted, r.w_weighted, r.v_weighted
        );
    }
    let dir = conf.output_dir();
    prepare_dir(&dir)?;
    write_json(&dir.join("compare.json"), &report)?;
    Ok(report)
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        2
    } else {
        3
    }
}

fn dispatch(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Profile { run, exact } => cmd_profile(&run.resolve()?, *exact).map(drop),
        Command::Ytilde { run } => cmd_ytilde(&run.resolve()?).map(drop),
        Command::Beta { run } => cmd_beta(&run.resolve()?).map(drop),
        Command::Scan { run } => cmd_scan(&run.resolve()?).map(drop),
        Command::Compare { run } => cmd_compare(&run.resolve()?).map(drop),
    }
}

/// Parse `args`, run the command and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            exit_code(&e)
        }
    }
}
