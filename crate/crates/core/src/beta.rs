//! The refined stability coefficient `beta = I / (d Delta / d lambda)`.
//!
//! `I = int 2 (i tau0 + i xi0 a2(ubar)) (w + i v) + 2 xi0^2 ubar' dx` over the
//! truncated line, with `ubar'` taken from the profile equation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{NeutralFrequency, ShockConfig};
use crate::numerics::{quad, QuadratureRule};
use crate::profile::{
    solve_profile_with, Grid, ProfileIntegration, ProfileOptions, ProfileSolution,
};
use crate::ytilde::{
    solve_coupled, solve_ytilde_if, CoupledDiagnostics, CoupledOptions, IfOptions, Method,
    YTildeSolution,
};

/// `|Re beta|` below this is reported with sign 0.
pub const SIGN_THRESHOLD: f64 = 1e-10;

/// Tail tolerance used by β runs; loose enough for `L = 10` on the
/// Burgers example (tail `~ 9e-5`), tight enough to reject `L = 1`.
pub const BETA_TAIL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaResult {
    pub beta: Complex64,
    pub i_integral: Complex64,
    /// `d Delta / d lambda = u+ - u-`.
    pub delta_lambda: f64,
    pub sign_re_beta: i8,
    pub half_width: f64,
    pub intervals: usize,
    pub method: Method,
    pub quadrature: QuadratureRule,
}

pub fn sign_with_threshold(x: f64) -> i8 {
    if x > SIGN_THRESHOLD {
        1
    } else if x < -SIGN_THRESHOLD {
        -1
    } else {
        0
    }
}

pub fn integrand(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    profile: &ProfileSolution,
    ytilde: &YTildeSolution,
) -> Result<Vec<Complex64>> {
    if profile.grid != ytilde.grid {
        return Err(Error::GridMismatch(
            "profile and ytilde grids differ".into(),
        ));
    }
    let (tau0, xi0) = (freq.tau0, freq.xi0);
    Ok(profile
        .ubar
        .iter()
        .zip(ytilde.w.iter().zip(&ytilde.v))
        .map(|(&u, (&w, &v))| {
            let coef = Complex64::new(0.0, 2.0 * (tau0 + xi0 * cfg.flux.a2(u)));
            coef * Complex64::new(w, v) + 2.0 * xi0 * xi0 * cfg.profile_rhs(u)
        })
        .collect())
}

pub fn compute_i(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    profile: &ProfileSolution,
    ytilde: &YTildeSolution,
    rule: QuadratureRule,
) -> Result<Complex64> {
    let g = integrand(cfg, freq, profile, ytilde)?;
    let h = profile.grid.step();
    let re: Vec<f64> = g.iter().map(|z| z.re).collect();
    let im: Vec<f64> = g.iter().map(|z| z.im).collect();
    Ok(Complex64::new(quad(rule, &re, h)?, quad(rule, &im, h)?))
}

pub fn compute_beta(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    profile: &ProfileSolution,
    ytilde: &YTildeSolution,
    rule: QuadratureRule,
) -> Result<BetaResult> {
    let i_integral = compute_i(cfg, freq, profile, ytilde, rule)?;
    let delta_lambda = cfg.lopatinskii_dlambda();
    let beta = i_integral / delta_lambda;
    Ok(BetaResult {
        beta,
        i_integral,
        delta_lambda,
        sign_re_beta: sign_with_threshold(beta.re),
        half_width: profile.grid.half_width(),
        intervals: profile.grid.intervals(),
        method: ytilde.method,
        quadrature: rule,
    })
}

/// `beta` from the two Evans-function coefficients, both of which carry the
/// same transversality factor; the factor cancels.
pub fn beta_from_evans_coefficients(
    scaled_i: Complex64,
    scaled_delta_lambda: Complex64,
) -> Complex64 {
    scaled_i / scaled_delta_lambda
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaOptions {
    pub quadrature: QuadratureRule,
    pub tail_tol: f64,
    pub profile: ProfileIntegration,
    pub integrating_factor: IfOptions,
    pub coupled: CoupledOptions,
}

impl Default for BetaOptions {
    fn default() -> Self {
        Self {
            quadrature: QuadratureRule::Trapezoid,
            tail_tol: BETA_TAIL_TOL,
            profile: ProfileIntegration::GridLocked,
            integrating_factor: IfOptions::default(),
            coupled: CoupledOptions::default(),
        }
    }
}

/// Everything produced on the way to one value of β.
#[derive(Debug, Clone)]
pub struct BetaRun {
    pub profile: ProfileSolution,
    pub ytilde: YTildeSolution,
    pub result: BetaResult,
    pub coupled: Option<CoupledDiagnostics>,
    pub quadrature_estimate: Option<f64>,
}

/// Profile, `ytilde` by `method`, then β.
pub fn run_beta(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    grid: &Grid,
    method: Method,
    opts: &BetaOptions,
) -> Result<BetaRun> {
    let (profile, ytilde, coupled, estimate) = match method {
        Method::IntegratingFactor => {
            let popts = ProfileOptions {
                tail_tol: opts.tail_tol,
                integration: opts.profile,
            };
            let profile = solve_profile_with(cfg, grid, &popts)?;
            let (y, d) = solve_ytilde_if(cfg, freq, &profile, &opts.integrating_factor)?;
            (profile, y, None, Some(d.quadrature_estimate))
        }
        Method::Coupled => {
            let copts = CoupledOptions {
                tail_tol: opts.tail_tol,
                ..opts.coupled
            };
            let sol = solve_coupled(cfg, freq, grid, &copts)?;
            (sol.profile, sol.ytilde, Some(sol.diagnostics), None)
        }
    };
    let result = compute_beta(cfg, freq, &profile, &ytilde, opts.quadrature)?;
    Ok(BetaRun {
        profile,
        ytilde,
        result,
        coupled,
        quadrature_estimate: estimate,
    })
}

/// Even interval count giving roughly `density` intervals per unit length.
pub fn intervals_for(half_width: f64, density: f64) -> usize {
    let n = (2.0 * half_width * density).round() as usize;
    (n + n % 2).max(2)
}

#[derive(Debug)]
pub struct StudyRow {
    pub half_width: f64,
    pub outcome: Result<BetaRun>,
}

#[derive(Debug)]
pub struct ConvergenceStudy {
    pub method: Method,
    pub rows: Vec<StudyRow>,
}

impl ConvergenceStudy {
    pub fn results(&self) -> impl Iterator<Item = &BetaResult> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok().map(|run| &run.result))
    }

    /// Every solved row reports the same nonzero sign of `Re beta`.
    pub fn sign_stable(&self) -> bool {
        let mut signs = self.results().map(|r| r.sign_re_beta);
        match signs.next() {
            Some(first) if first != 0 => signs.all(|s| s == first),
            _ => false,
        }
    }
}

/// β for each half-width in parallel at fixed point density; failures stay
/// in their rows.
pub fn beta_convergence_study(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    half_widths: &[f64],
    density: f64,
    method: Method,
    opts: &BetaOptions,
) -> ConvergenceStudy {
    let rows = half_widths
        .par_iter()
        .map(|&l| StudyRow {
            half_width: l,
            outcome: Grid::new(l, intervals_for(l, density))
                .and_then(|g| run_beta(cfg, freq, &g, method, opts)),
        })
        .collect();
    ConvergenceStudy { method, rows }
}
