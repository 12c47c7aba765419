//! `ytilde` from a computed profile by variation of constants.
//!
//! With `M(x) = exp(-int_0^x a1(ubar))` the two components are
//! `w = A / M` and `v = (B + int_0^x M F) / M`. `M` grows like `cosh^2` in the
//! Burgers case, so everything is carried in terms of `log M` and `v` is
//! advanced panel by panel with factors `exp(log M(z) - log M(x)) <= 1`.

use crate::error::Result;
use crate::model::{NeutralFrequency, ShockConfig};
use crate::numerics::{cumquad, QuadratureRule};
use crate::profile::{Grid, ProfileSolution};

use super::{Method, YTildeSolution};

/// Threshold on the step-doubling estimate of the quadrature error in `v`.
pub const QUADRATURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IfOptions {
    pub rule: QuadratureRule,
    /// `w(0)`.
    pub a: f64,
    /// `v(0)`.
    pub b: f64,
}

impl Default for IfOptions {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::Simpson,
            a: 0.0,
            b: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IfDiagnostics {
    /// Step-doubling estimate of the quadrature error in `v` (NaN when the
    /// grid cannot be halved).
    pub quadrature_estimate: f64,
    pub quadrature_degraded: bool,
}

/// `F = tau0 (ubar - u-) + xi0 (f2(ubar) - f2(u-))`.
pub fn forcing(cfg: &ShockConfig, freq: &NeutralFrequency, profile: &ProfileSolution) -> Vec<f64> {
    let f2m = cfg.flux.f2(cfg.u_minus);
    profile
        .ubar
        .iter()
        .map(|&u| freq.tau0 * (u - cfg.u_minus) + freq.xi0 * (cfg.flux.f2(u) - f2m))
        .collect()
}

/// Values on the two half-lines starting at the origin: `(right, left)`,
/// each beginning with the origin sample.
fn halves<T: Copy>(v: &[T], origin: usize) -> (Vec<T>, Vec<T>) {
    (
        v[origin..].to_vec(),
        v[..=origin].iter().rev().copied().collect(),
    )
}

fn join(right: &[f64], left: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = left.iter().rev().copied().collect();
    out.extend_from_slice(&right[1..]);
    out
}

fn log_factor_on(
    cfg: &ShockConfig,
    ubar: &[f64],
    grid: &Grid,
    rule: QuadratureRule,
) -> Result<Vec<f64>> {
    let neg_a: Vec<f64> = ubar.iter().map(|&u| -cfg.a1_shifted(u)).collect();
    let (r, l) = halves(&neg_a, grid.origin_index());
    let h = grid.step();
    Ok(join(&cumquad(rule, &r, h)?, &cumquad(rule, &l, -h)?))
}

/// `log M(x) = -int_0^x a1(ubar(z)) dz` by cumulative quadrature from the origin.
pub fn log_integrating_factor(
    cfg: &ShockConfig,
    profile: &ProfileSolution,
    rule: QuadratureRule,
) -> Result<Vec<f64>> {
    log_factor_on(cfg, &profile.ubar, &profile.grid, rule)
}

/// `M(x)` with cumulative Simpson.
pub fn integrating_factor(cfg: &ShockConfig, profile: &ProfileSolution) -> Result<Vec<f64>> {
    Ok(
        log_integrating_factor(cfg, profile, QuadratureRule::Simpson)?
            .into_iter()
            .map(f64::exp)
            .collect(),
    )
}

/// `w = A exp(int_0^x a1(ubar))`.
pub fn solve_w_if(log_m: &[f64], a: f64) -> Vec<f64> {
    if a == 0.0 {
        return vec![0.0; log_m.len()];
    }
    log_m.iter().map(|l| a * (-l).exp()).collect()
}

/// One half-line of `v`, index 0 at the origin, signed step `h`.
fn sweep(log_m: &[f64], f: &[f64], h: f64, b: f64, rule: QuadratureRule) -> Vec<f64> {
    let n = log_m.len();
    let mut v = vec![0.0; n];
    v[0] = b;
    let e = |j: usize, k: usize| (log_m[j] - log_m[k]).exp();
    for k in 1..n {
        let simpson_panel = rule == QuadratureRule::Simpson && k % 2 == 0;
        v[k] = if simpson_panel {
            e(k - 2, k) * v[k - 2]
                + h / 3.0 * (e(k - 2, k) * f[k - 2] + 4.0 * e(k - 1, k) * f[k - 1] + f[k])
        } else {
            // under Simpson k - 1 is even here, as in the cumulative rule
            e(k - 1, k) * v[k - 1] + 0.5 * h * (e(k - 1, k) * f[k - 1] + f[k])
        };
    }
    v
}

/// `v = (B + int_0^x M F) / M`.
pub fn solve_v_if(
    grid: &Grid,
    log_m: &[f64],
    forcing: &[f64],
    b: f64,
    rule: QuadratureRule,
) -> Vec<f64> {
    let o = grid.origin_index();
    let (lr, ll) = halves(log_m, o);
    let (fr, fl) = halves(forcing, o);
    let h = grid.step();
    join(&sweep(&lr, &fr, h, b, rule), &sweep(&ll, &fl, -h, b, rule))
}

/// Observed order of the cumulative rule (odd prefixes end in a trapezoid panel).
fn order(rule: QuadratureRule) -> i32 {
    match rule {
        QuadratureRule::Simpson => 3,
        QuadratureRule::Trapezoid => 2,
    }
}

/// Both components plus the step-doubling quadrature estimate.
pub fn solve_ytilde_if(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    profile: &ProfileSolution,
    opts: &IfOptions,
) -> Result<(YTildeSolution, IfDiagnostics)> {
    let grid = &profile.grid;
    let log_m = log_integrating_factor(cfg, profile, opts.rule)?;
    let f = forcing(cfg, freq, profile);
    let w = solve_w_if(&log_m, opts.a);
    let v = solve_v_if(grid, &log_m, &f, opts.b, opts.rule);

    let estimate = match grid.coarsened() {
        Some(coarse) => {
            let ub: Vec<f64> = profile.ubar.iter().step_by(2).copied().collect();
            let fc: Vec<f64> = f.iter().step_by(2).copied().collect();
            let lc = log_factor_on(cfg, &ub, &coarse, opts.rule)?;
            let vc = solve_v_if(&coarse, &lc, &fc, opts.b, opts.rule);
            let diff = vc
                .iter()
                .zip(v.iter().step_by(2))
                .fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
            diff / (2f64.powi(order(opts.rule)) - 1.0)
        }
        None => f64::NAN,
    };
    let sol = YTildeSolution {
        grid: grid.clone(),
        w,
        v,
        method: Method::IntegratingFactor,
        freq: *freq,
    };
    Ok((
        sol,
        IfDiagnostics {
            quadrature_estimate: estimate,
            quadrature_degraded: estimate > QUADRATURE_TOL,
        },
    ))
}
