//! The standing viscous profile `ubar` on a truncated line `[-L, L]`.

use crate::error::{Error, Result};
use crate::model::ShockConfig;
use crate::numerics::{ivp_solve, IvpProblem};

/// Default bound on `|ubar(+-L) - u+-|`.
pub const TAIL_TOL: f64 = 1e-6;
/// Default half-width.
pub const DEFAULT_HALF_WIDTH: f64 = 20.0;

/// `N + 1` uniformly spaced abscissae on `[-L, L]`. `N` is even so that the
/// origin is the node `N / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    half_width: f64,
    intervals: usize,
    pub x: Vec<f64>,
}

impl Grid {
    pub fn new(half_width: f64, intervals: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::BadGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if intervals < 2 || !intervals.is_multiple_of(2) {
            return Err(Error::BadGrid(format!(
                "interval count must be even and at least 2, got {intervals}"
            )));
        }
        let n = intervals as f64;
        let x = (0..=intervals)
            .map(|k| half_width * (2.0 * k as f64 - n) / n)
            .collect();
        Ok(Self {
            half_width,
            intervals,
            x,
        })
    }

    /// `L`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// `N`.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.intervals as f64
    }

    pub fn origin_index(&self) -> usize {
        self.intervals / 2
    }

    /// Same grid with twice the spacing (every other node).
    pub fn coarsened(&self) -> Option<Grid> {
        if !self.intervals.is_multiple_of(4) {
            return None;
        }
        Grid::new(self.half_width, self.intervals / 2).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ProfileIntegration {
    /// One fixed Dormand–Prince step per grid interval.
    #[default]
    GridLocked,
    /// Error-controlled steps, sampled through the dense output.
    Adaptive { rtol: f64, atol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    pub tail_tol: f64,
    pub integration: ProfileIntegration,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            tail_tol: TAIL_TOL,
            integration: ProfileIntegration::GridLocked,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSolution {
    pub grid: Grid,
    pub ubar: Vec<f64>,
    /// `f1s(ubar) - f1s(u-)` at every node.
    pub ubar_prime: Vec<f64>,
    pub exact: bool,
}

impl ProfileSolution {
    pub fn tail_residual(&self, cfg: &ShockConfig) -> f64 {
        let n = self.ubar.len() - 1;
        (self.ubar[0] - cfg.u_minus)
            .abs()
            .max((self.ubar[n] - cfg.u_plus).abs())
    }

    pub fn ode_residual(&self, cfg: &ShockConfig) -> f64 {
        self.ubar
            .iter()
            .zip(&self.ubar_prime)
            .map(|(u, du)| (du - cfg.profile_rhs(*u)).abs())
            .fold(0.0, f64::max)
    }

    /// No step of `ubar` goes against the direction of the jump and `ubar'`
    /// never takes the opposite sign (flat steps are allowed once the tails
    /// saturate in floating point).
    pub fn is_monotone(&self, cfg: &ShockConfig) -> bool {
        let dir = cfg.jump_u().signum();
        self.ubar.windows(2).all(|w| (w[1] - w[0]) * dir >= 0.0)
            && self.ubar_prime.iter().all(|d| d * dir >= 0.0)
    }

    pub fn max_abs_diff(&self, other: &ProfileSolution) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "profiles live on different grids".into(),
            ));
        }
        Ok(self
            .ubar
            .iter()
            .zip(&other.ubar)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn check_invariants(&self, cfg: &ShockConfig, tail_tol: f64) -> Result<()> {
        let tail = self.tail_residual(cfg);
        if !(tail <= tail_tol) {
            return Err(Error::TailNotResolved {
                residual: tail,
                tol: tail_tol,
            });
        }
        let ode = self.ode_residual(cfg);
        if !(ode <= 1e-8) {
            return Err(Error::Internal(format!("profile ODE residual {ode:e}")));
        }
        if !self.is_monotone(cfg) {
            return Err(Error::Internal("profile is not monotone".into()));
        }
        Ok(())
    }
}

/// `ubar(x) = -tanh(x / 2)`, the Burgers profile between `u- = 1` and `u+ = -1`.
pub fn exact_burgers_profile(grid: &Grid) -> ProfileSolution {
    let ubar: Vec<f64> = grid.x.iter().map(|x| -(0.5 * x).tanh()).collect();
    let ubar_prime = ubar.iter().map(|u| 0.5 * (u * u - 1.0)).collect();
    ProfileSolution {
        grid: grid.clone(),
        ubar,
        ubar_prime,
        exact: true,
    }
}

/// Integrate the profile equation outward from the node `anchor` (where
/// `ubar` is set to the midpoint of the end states) to both ends of the grid.
/// No tail check is made.
pub fn integrate_profile(
    cfg: &ShockConfig,
    grid: &Grid,
    anchor: usize,
    integration: ProfileIntegration,
) -> Result<Vec<f64>> {
    if anchor > grid.intervals() {
        return Err(Error::BadGrid(format!(
            "anchor node {anchor} outside the grid"
        )));
    }
    let rhs = |_x: f64, y: &[f64], dy: &mut [f64]| dy[0] = cfg.profile_rhs(y[0]);
    let mid = cfg.midpoint();
    let mut ubar = vec![f64::NAN; grid.len()];
    ubar[anchor] = mid;
    let x0 = grid.x[anchor];
    let h = grid.step();

    let mut sweep = |nodes: Vec<usize>| -> Result<()> {
        if nodes.is_empty() {
            return Ok(());
        }
        let steps = nodes.len();
        let x1 = grid.x[*nodes.last().expect("non-empty")];
        let base = IvpProblem::new(rhs, (x0, x1), vec![mid]);
        match integration {
            ProfileIntegration::GridLocked => {
                let tr = ivp_solve(&base.fixed_steps(steps))?;
                for (i, &k) in nodes.iter().enumerate() {
                    ubar[k] = tr.y[i + 1][0];
                }
            }
            ProfileIntegration::Adaptive { rtol, atol } => {
                let tr = ivp_solve(&base.tolerances(rtol, atol).max_step(4.0 * h))?;
                for &k in &nodes {
                    ubar[k] = tr.eval(grid.x[k])[0];
                }
            }
        }
        Ok(())
    };
    sweep((anchor + 1..grid.len()).collect())?;
    sweep((0..anchor).rev().collect())?;
    Ok(ubar)
}

pub fn solve_profile(cfg: &ShockConfig, grid: &Grid) -> Result<ProfileSolution> {
    solve_profile_with(cfg, grid, &ProfileOptions::default())
}

pub fn solve_profile_with(
    cfg: &ShockConfig,
    grid: &Grid,
    opts: &ProfileOptions,
) -> Result<ProfileSolution> {
    let ubar = integrate_profile(cfg, grid, grid.origin_index(), opts.integration)?;
    let ubar_prime = ubar.iter().map(|&u| cfg.profile_rhs(u)).collect();
    let sol = ProfileSolution {
        grid: grid.clone(),
        ubar,
        ubar_prime,
        exact: false,
    };
    sol.check_invariants(cfg, opts.tail_tol)?;
    Ok(sol)
}
