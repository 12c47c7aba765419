//! The auxiliary function `ytilde = w + i v`, by either construction.

pub mod coupled;
pub mod integrating_factor;

use crate::error::{Error, Result};
use crate::model::{NeutralFrequency, ShockConfig};
use crate::profile::{Grid, ProfileSolution};

pub use coupled::{
    build_folded_system, continuation_scan, initial_guess, solve_coupled, CoupledDiagnostics,
    CoupledOptions, CoupledSolution, FoldedSystem, ScanOutcome, ScanPoint,
};
pub use integrating_factor::{
    forcing, integrating_factor, log_integrating_factor, solve_v_if, solve_w_if, solve_ytilde_if,
    IfDiagnostics, IfOptions,
};

/// Decay bound on `|w(+-L)|`, `|v(+-L)|`.
pub const DECAY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    IntegratingFactor,
    Coupled,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::IntegratingFactor => "if",
            Method::Coupled => "coupled",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "if" | "integrating_factor" => Ok(Method::IntegratingFactor),
            "coupled" | "auto" => Ok(Method::Coupled),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YTildeSolution {
    pub grid: Grid,
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    pub method: Method,
    pub freq: NeutralFrequency,
}

impl YTildeSolution {
    pub fn decay_residual(&self) -> f64 {
        let n = self.w.len() - 1;
        [self.w[0], self.w[n], self.v[0], self.v[n]]
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()))
    }

    pub fn origin_residual(&self) -> f64 {
        let k = self.grid.origin_index();
        self.w[k].abs().max(self.v[k].abs())
    }

    /// Decay at both ends and `w(0) = v(0) = 0`.
    pub fn check_invariants(&self, decay_tol: f64) -> Result<()> {
        let d = self.decay_residual();
        if !(d <= decay_tol) {
            return Err(Error::TailNotResolved {
                residual: d,
                tol: decay_tol,
            });
        }
        let o = self.origin_residual();
        if !(o <= 1e-12) {
            return Err(Error::Internal(format!(
                "ytilde does not vanish at the origin ({o:e})"
            )));
        }
        Ok(())
    }

    /// Largest residual of `w' = a1 w` and `v' = a1 v + F` on interior nodes,
    /// with derivatives from the five-point centered stencil.
    pub fn ode_residual(&self, cfg: &ShockConfig, profile: &ProfileSolution) -> Result<f64> {
        if profile.grid != self.grid {
            return Err(Error::GridMismatch(
                "profile and ytilde grids differ".into(),
            ));
        }
        let f = forcing(cfg, &self.freq, profile);
        let h = self.grid.step();
        let n = self.grid.len();
        let d = |y: &[f64], k: usize| {
            (y[k - 2] - 8.0 * y[k - 1] + 8.0 * y[k + 1] - y[k + 2]) / (12.0 * h)
        };
        let mut worst = 0.0f64;
        for k in 2..n.saturating_sub(2) {
            let a = cfg.a1_shifted(profile.ubar[k]);
            worst = worst
                .max((d(&self.w, k) - a * self.w[k]).abs())
                .max((d(&self.v, k) - a * self.v[k] - f[k]).abs());
        }
        Ok(worst)
    }
}

/// `w = 0`, `v = -xi0 x sech^2(x / 2)`: the closed form for Burgers with
/// `f2 = u^2` between `u- = 1` and `u+ = -1` (where `tau0 = 0`).
pub fn exact_ytilde(grid: &Grid, freq: NeutralFrequency) -> YTildeSolution {
    let v = grid
        .x
        .iter()
        .map(|&x| {
            let c = (0.5 * x).cosh();
            -freq.xi0 * x / (c * c)
        })
        .collect();
    YTildeSolution {
        grid: grid.clone(),
        w: vec![0.0; grid.len()],
        v,
        method: Method::Coupled,
        freq,
    }
}
