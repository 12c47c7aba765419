//! `ubar`, `w` and `v` together as one boundary value problem.
//!
//! The field `U' = F(U)` with `U = (ubar, w, v)` is folded about the origin:
//! `U_r(t) = U(L t)` and `U_l(t) = U(-L t)` on `t in [0, 1]`, giving a
//! six-dimensional system whose conditions all sit at `t = 0`:
//!
//! - `ubar_r(0) = ubar_l(0)` and `w_l(0) = w_r(0)`, `v_l(0) = v_r(0)` (matching)
//! - `ubar_r(0) = (u- + u+) / 2` (phase)
//! - `w_r(0) = 0`, `v_r(0) = 0` (normalization of the two free constants)
//!
//! Both end states are nodes that attract the respective outward flows, so
//! the far field needs no condition; the tail residual is checked after the
//! solve instead.

use crate::error::{Error, Result};
use crate::model::{FluxModel, NeutralFrequency, ShockConfig};
use crate::numerics::{
    bvp_solve, ivp_solve, BvpOptions, BvpProblem, BvpSolution, BvpSystem, IvpProblem, Trajectory,
};
use crate::profile::{Grid, ProfileSolution, TAIL_TOL};

use super::{Method, YTildeSolution};

/// Largest tolerated disagreement of the two branches at the origin.
const ORIGIN_MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FoldedSystem {
    cfg: ShockConfig,
    freq: NeutralFrequency,
    half_width: f64,
    f2_minus: f64,
}

pub fn build_folded_system(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    half_width: f64,
) -> Result<FoldedSystem> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::BadGrid(format!(
            "half-width must be positive, got {half_width}"
        )));
    }
    Ok(FoldedSystem {
        cfg: cfg.clone(),
        freq: *freq,
        half_width,
        f2_minus: cfg.flux.f2(cfg.u_minus),
    })
}

impl FoldedSystem {
    pub fn shock(&self) -> &ShockConfig {
        &self.cfg
    }

    pub fn freq(&self) -> &NeutralFrequency {
        &self.freq
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// The unfolded field `F(ubar, w, v)`.
    pub fn field(&self, u: &[f64], out: &mut [f64]) {
        let c = &self.cfg;
        let a = c.a1_shifted(u[0]);
        out[0] = c.profile_rhs(u[0]);
        out[1] = a * u[1];
        out[2] = a * u[2]
            + self.freq.tau0 * (u[0] - c.u_minus)
            + self.freq.xi0 * (c.flux.f2(u[0]) - self.f2_minus);
    }

    /// `dF`, row-major.
    pub fn field_jacobian(&self, u: &[f64]) -> [[f64; 3]; 3] {
        let c = &self.cfg;
        let a = c.a1_shifted(u[0]);
        let da = c.flux.da1(u[0]);
        [
            [a, 0.0, 0.0],
            [da * u[1], a, 0.0],
            [
                da * u[2] + self.freq.tau0 + self.freq.xi0 * c.flux.a2(u[0]),
                0.0,
                a,
            ],
        ]
    }

    /// Equilibria `(u-, 0, 0)` and `(u+, 0, 0)`.
    pub fn equilibria(&self) -> [[f64; 3]; 2] {
        [[self.cfg.u_minus, 0.0, 0.0], [self.cfg.u_plus, 0.0, 0.0]]
    }
}

impl BvpSystem for FoldedSystem {
    fn dim(&self) -> usize {
        6
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let l = self.half_width;
        self.field(&y[0..3], &mut dy[0..3]);
        self.field(&y[3..6], &mut dy[3..6]);
        for (k, d) in dy.iter_mut().enumerate() {
            *d *= if k < 3 { l } else { -l };
        }
    }

    fn bc(&self, ya: &[f64], _yb: &[f64]) -> Vec<f64> {
        vec![
            ya[0] - ya[3],
            ya[0] - self.cfg.midpoint(),
            ya[1],
            ya[2],
            ya[4] - ya[1],
            ya[5] - ya[2],
        ]
    }

    fn jacobian(&self, _t: f64, y: &[f64], jac: &mut [f64]) -> bool {
        jac.fill(0.0);
        let l = self.half_width;
        for (block, sign) in [(0usize, l), (3usize, -l)] {
            let j = self.field_jacobian(&y[block..block + 3]);
            for r in 0..3 {
                for c in 0..3 {
                    jac[(block + r) * 6 + block + c] = sign * j[r][c];
                }
            }
        }
        true
    }
}

/// Outward IVP solutions from the origin, folded onto `[0, 1]`.
pub struct FoldedGuess {
    half_width: f64,
    forward: Trajectory,
    backward: Trajectory,
}

impl FoldedGuess {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut y = self.forward.eval(self.half_width * t);
        y.extend(self.backward.eval(-self.half_width * t));
        y
    }

    pub fn samples(&self, mesh: &[f64]) -> Vec<Vec<f64>> {
        mesh.iter().map(|&t| self.eval(t)).collect()
    }
}

/// Integrate `U' = F(U)` from `(midpoint, 0, 0)` to `+-L`.
pub fn initial_guess(sys: &FoldedSystem, rtol: f64, atol: f64) -> Result<FoldedGuess> {
    let l = sys.half_width();
    let rhs = |_x: f64, y: &[f64], dy: &mut [f64]| sys.field(y, dy);
    let y0 = vec![sys.shock().midpoint(), 0.0, 0.0];
    let forward = ivp_solve(&IvpProblem::new(rhs, (0.0, l), y0.clone()).tolerances(rtol, atol))?;
    let backward = ivp_solve(&IvpProblem::new(rhs, (0.0, -l), y0).tolerances(rtol, atol))?;
    Ok(FoldedGuess {
        half_width: l,
        forward,
        backward,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOptions {
    pub bvp: BvpOptions,
    /// Intervals of the initial mesh on `[0, 1]`; `None` uses half the grid
    /// intervals so that mesh nodes coincide with grid nodes.
    pub mesh_intervals: Option<usize>,
    pub tail_tol: f64,
    pub guess_rtol: f64,
    pub guess_atol: f64,
}

impl Default for CoupledOptions {
    fn default() -> Self {
        Self {
            bvp: BvpOptions::default(),
            mesh_intervals: None,
            tail_tol: TAIL_TOL,
            guess_rtol: 1e-10,
            guess_atol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledDiagnostics {
    pub newton_iters: usize,
    pub residual_norm: f64,
    pub mesh_points: usize,
    pub refinements: usize,
    pub origin_mismatch: f64,
}

#[derive(Debug, Clone)]
pub struct CoupledSolution {
    pub profile: ProfileSolution,
    pub ytilde: YTildeSolution,
    pub bvp: BvpSolution,
    pub diagnostics: CoupledDiagnostics,
}

fn uniform_mesh(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

fn unfold(sys: &FoldedSystem, sol: &BvpSolution, grid: &Grid) -> Result<([Vec<f64>; 3], f64)> {
    let l = sys.half_width();
    let o = grid.origin_index();
    let n = grid.len();
    let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for k in 0..n {
        let x = grid.x[k];
        let (t, off) = if k >= o { (x / l, 0) } else { (-x / l, 3) };
        let y = sol.eval(t.clamp(0.0, 1.0));
        for c in 0..3 {
            out[c][k] = y[off + c];
        }
    }
    let y0 = sol.eval(0.0);
    let mismatch = (0..3).fold(0.0f64, |a, c| a.max((y0[c] - y0[c + 3]).abs()));
    if !(mismatch <= ORIGIN_MATCH_TOL) {
        return Err(Error::Internal(format!(
            "folded branches disagree at the origin by {mismatch:e}"
        )));
    }
    Ok((out, mismatch))
}

fn finish(
    sys: &FoldedSystem,
    grid: &Grid,
    bvp: BvpSolution,
    opts: &CoupledOptions,
) -> Result<CoupledSolution> {
    let cfg = sys.shock();
    let ([ubar, w, v], mismatch) = unfold(sys, &bvp, grid)?;
    let ubar_prime = ubar.iter().map(|&u| cfg.profile_rhs(u)).collect();
    let profile = ProfileSolution {
        grid: grid.clone(),
        ubar,
        ubar_prime,
        exact: false,
    };
    profile.check_invariants(cfg, opts.tail_tol)?;
    let diagnostics = CoupledDiagnostics {
        newton_iters: bvp.newton_iters,
        residual_norm: bvp.residual_norm,
        mesh_points: bvp.mesh.len(),
        refinements: bvp.refinements,
        origin_mismatch: mismatch,
    };
    Ok(CoupledSolution {
        profile,
        ytilde: YTildeSolution {
            grid: grid.clone(),
            w,
            v,
            method: Method::Coupled,
            freq: *sys.freq(),
        },
        bvp,
        diagnostics,
    })
}

/// Solve from an IVP-generated guess on a uniform initial mesh.
pub fn solve_coupled(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    grid: &Grid,
    opts: &CoupledOptions,
) -> Result<CoupledSolution> {
    let sys = build_folded_system(cfg, freq, grid.half_width())?;
    let guess = initial_guess(&sys, opts.guess_rtol, opts.guess_atol)?;
    let mesh = uniform_mesh(opts.mesh_intervals.unwrap_or(grid.intervals() / 2).max(1));
    let problem =
        BvpProblem::with_guess_fn(sys.clone(), mesh, |t| guess.eval(t))?.options(opts.bvp);
    let bvp = bvp_solve(&problem)?;
    finish(&sys, grid, bvp, opts)
}

/// Solve starting from an earlier solution (same or nearby parameters). The
/// previous profile components are mapped affinely onto the new end states.
pub fn solve_coupled_from(
    cfg: &ShockConfig,
    freq: &NeutralFrequency,
    grid: &Grid,
    previous: &CoupledSolution,
    previous_cfg: &ShockConfig,
    opts: &CoupledOptions,
) -> Result<CoupledSolution> {
    let sys = build_folded_system(cfg, freq, grid.half_width())?;
    let scale = cfg.jump_u() / previous_cfg.jump_u();
    let map = |u: f64| cfg.u_plus + (u - previous_cfg.u_plus) * scale;
    let guess = |t: f64| {
        let mut y = previous.bvp.eval(t);
        y[0] = map(y[0]);
        y[3] = map(y[3]);
        y
    };
    let problem =
        BvpProblem::with_guess_fn(sys.clone(), previous.bvp.mesh.clone(), guess)?.options(opts.bvp);
    let bvp = bvp_solve(&problem)?;
    finish(&sys, grid, bvp, opts)
}

#[derive(Debug, Clone)]
pub struct ScanPoint {
    pub u_minus: f64,
    pub cfg: ShockConfig,
    pub freq: NeutralFrequency,
    pub solution: CoupledSolution,
}

#[derive(Debug)]
pub struct ScanOutcome {
    pub points: Vec<ScanPoint>,
    /// `ContinuationStalled` when the chain stopped early.
    pub stall: Option<Error>,
}

impl ScanOutcome {
    pub fn stall_index(&self) -> Option<usize> {
        match &self.stall {
            Some(Error::ContinuationStalled { index, .. }) => Some(*index),
            _ => None,
        }
    }
}

fn scan_point(
    flux: &FluxModel,
    u_minus: f64,
    u_plus: f64,
    xi0: f64,
    grid: &Grid,
    prev: Option<&ScanPoint>,
    opts: &CoupledOptions,
) -> Result<ScanPoint> {
    let cfg = ShockConfig::from_end_states(flux, u_minus, u_plus)?;
    let freq = cfg.neutral_zero(xi0)?;
    let solution = match prev {
        Some(p) => solve_coupled_from(&cfg, &freq, grid, &p.solution, &p.cfg, opts)?,
        None => solve_coupled(&cfg, &freq, grid, opts)?,
    };
    Ok(ScanPoint {
        u_minus,
        cfg,
        freq,
        solution,
    })
}

/// Natural-parameter continuation in `u-`, each solve warm-started from the
/// previous point. A solver failure is retried once through the midpoint
/// step; the original error is kept if that also fails.
pub fn continuation_scan(
    flux: &FluxModel,
    u_plus: f64,
    xi0: f64,
    u_minus_values: &[f64],
    grid: &Grid,
    opts: &CoupledOptions,
) -> ScanOutcome {
    let mut points: Vec<ScanPoint> = Vec::with_capacity(u_minus_values.len());
    for (index, &target) in u_minus_values.iter().enumerate() {
        let attempt = scan_point(flux, target, u_plus, xi0, grid, points.last(), opts);
        let result = match (attempt, points.last()) {
            (Ok(p), _) => Ok(p),
            (Err(e), None) => Err(e),
            (Err(e), Some(_)) if e.is_validation() => Err(e),
            (Err(e), Some(prev)) => {
                let mid = 0.5 * (prev.u_minus + target);
                scan_point(flux, mid, u_plus, xi0, grid, Some(prev), opts)
                    .and_then(|m| scan_point(flux, target, u_plus, xi0, grid, Some(&m), opts))
                    .map_err(|_| e)
            }
        };
        match result {
            Ok(p) => points.push(p),
            Err(source) => {
                return ScanOutcome {
                    points,
                    stall: Some(Error::ContinuationStalled {
                        index,
                        u_minus: target,
                        source: Box::new(source),
                    }),
                }
            }
        }
    }
    ScanOutcome {
        points,
        stall: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{exact_burgers_profile, solve_profile};
    use crate::ytilde::{exact_ytilde, solve_ytilde_if, IfOptions};

    fn exact_case() -> (ShockConfig, NeutralFrequency) {
        let cfg =
            ShockConfig::from_end_states(&FluxModel::quadratic_transverse(), 1.0, -1.0).unwrap();
        let freq = cfg.neutral_zero(1.0).unwrap();
        (cfg, freq)
    }

    fn norm2(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    }

    fn exact_u(x: f64) -> [f64; 3] {
        let c = (0.5 * x).cosh();
        [-(0.5 * x).tanh(), 0.0, -x / (c * c)]
    }

    fn exact_du(x: f64) -> [f64; 3] {
        let c = (0.5 * x).cosh();
        let s2 = 1.0 / (c * c);
        [-0.5 * s2, 0.0, -s2 + x * s2 * (0.5 * x).tanh()]
    }

    #[test]
    fn field_vanishes_on_the_exact_solution() {
        let (cfg, freq) = exact_case();
        let sys = build_folded_system(&cfg, &freq, 20.0).unwrap();
        let mut dy = [0.0; 6];
        for k in 0..=200 {
            let t = k as f64 / 200.0;
            let (r, l) = (exact_u(20.0 * t), exact_u(-20.0 * t));
            let y = [r[0], r[1], r[2], l[0], l[1], l[2]];
            sys.rhs(t, &y, &mut dy);
            let (dr, dl) = (exact_du(20.0 * t), exact_du(-20.0 * t));
            for c in 0..3 {
                assert!((dy[c] - 20.0 * dr[c]).abs() <= 1e-12);
                assert!((dy[c + 3] + 20.0 * dl[c]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn equilibria_are_rest_points() {
        for (um, up, xi0) in [(1.0, -1.0, 1.0), (1.3, -1.0, 1.0), (2.0, 0.5, -0.7)] {
            let f = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
            let cfg = ShockConfig::from_end_states(&f, um, up).unwrap();
            let freq = cfg.neutral_zero(xi0).unwrap();
            let sys = build_folded_system(&cfg, &freq, 10.0).unwrap();
            let mut out = [0.0; 3];
            for e in sys.equilibria() {
                sys.field(&e, &mut out);
                assert!(out.iter().all(|v| v.abs() < 1e-14), "{out:?}");
            }
        }
    }

    #[test]
    fn analytic_jacobian_matches_differences() {
        let (cfg, freq) = exact_case();
        let sys = build_folded_system(&cfg, &freq, 7.0).unwrap();
        let y = [0.3, 0.1, -0.4, 0.6, -0.2, 0.5];
        let mut jac = vec![0.0; 36];
        assert!(sys.jacobian(0.0, &y, &mut jac));
        let mut f0 = [0.0; 6];
        let mut f1 = [0.0; 6];
        sys.rhs(0.0, &y, &mut f0);
        for c in 0..6 {
            let mut yp = y;
            yp[c] += 1e-7;
            sys.rhs(0.0, &yp, &mut f1);
            for r in 0..6 {
                assert!(((f1[r] - f0[r]) / 1e-7 - jac[r * 6 + c]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn equilibrium_spectrum_is_a_triple_eigenvalue() {
        use nalgebra::Matrix3;
        let f = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
        for (um, up) in [(1.0, -1.0), (1.5, -1.0)] {
            let cfg = ShockConfig::from_end_states(&f, um, up).unwrap();
            let freq = cfg.neutral_zero(1.0).unwrap();
            let sys = build_folded_system(&cfg, &freq, 1.0).unwrap();
            for e in sys.equilibria() {
                // forward differences of the field
                let mut base = [0.0; 3];
                sys.field(&e, &mut base);
                let mut m = Matrix3::zeros();
                let mut out = [0.0; 3];
                for c in 0..3 {
                    let mut p = e;
                    let d = 1e-7 * (1.0 + e[c].abs());
                    p[c] += d;
                    sys.field(&p, &mut out);
                    for r in 0..3 {
                        m[(r, c)] = (out[r] - base[r]) / d;
                    }
                }
                let want = cfg.a1_shifted(e[0]);
                let eig = m.complex_eigenvalues();
                for z in eig.iter() {
                    assert!(
                        (z.re - want).abs() < 1e-6 && z.im.abs() < 1e-6,
                        "{z} vs {want}"
                    );
                }
                // exact Jacobian: the spectrum is its diagonal
                let j = sys.field_jacobian(&e);
                let exact = Matrix3::from_fn(|r, c| j[r][c]);
                for z in exact.complex_eigenvalues().iter() {
                    assert!(
                        (z.re - want).abs() < 1e-10 && z.im.abs() < 1e-10,
                        "{z} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn guess_from_ivp_is_accurate() {
        let (cfg, freq) = exact_case();
        let sys = build_folded_system(&cfg, &freq, 20.0).unwrap();
        let g = initial_guess(&sys, 1e-10, 1e-12).unwrap();
        let y1 = g.eval(1.0);
        assert!((y1[0] + 1.0).abs() < 1e-6 && (y1[3] - 1.0).abs() < 1e-6);
        assert_eq!(
            sys.bc(&g.eval(0.0), &y1)
                .iter()
                .fold(0.0f64, |a, v| a.max(v.abs())),
            0.0
        );
        let zero = NeutralFrequency {
            tau0: 0.0,
            xi0: 0.0,
        };
        let sys0 = build_folded_system(&cfg, &zero, 20.0).unwrap();
        let g0 = initial_guess(&sys0, 1e-10, 1e-12).unwrap();
        for k in 0..=10 {
            let y = g0.eval(k as f64 / 10.0);
            assert!(y[2] == 0.0 && y[5] == 0.0);
        }
    }

    #[test]
    fn exact_example_errors() {
        let (cfg, freq) = exact_case();
        let grid = Grid::new(20.0, 4000).unwrap();
        let sol = solve_coupled(&cfg, &freq, &grid, &CoupledOptions::default()).unwrap();
        assert!(sol.diagnostics.newton_iters <= 3, "{:?}", sol.diagnostics);
        assert!(sol.diagnostics.residual_norm <= 1e-8);
        let ex_u = exact_burgers_profile(&grid);
        let ex_y = exact_ytilde(&grid, freq);
        assert!(norm2(&sol.profile.ubar, &ex_u.ubar) <= 1.1e-7);
        assert!(norm2(&sol.ytilde.v, &ex_y.v) <= 5e-7);
        assert!(sol.ytilde.w.iter().all(|w| w.abs() <= 1e-12));
        assert!(sol.ytilde.ode_residual(&cfg, &sol.profile).unwrap() <= 1e-6);
        sol.ytilde.check_invariants(1e-4).unwrap();
    }

    #[test]
    fn zero_frequency_reduces_to_the_profile() {
        let (cfg, _) = exact_case();
        let zero = NeutralFrequency {
            tau0: 0.0,
            xi0: 0.0,
        };
        let grid = Grid::new(20.0, 2000).unwrap();
        let sol = solve_coupled(&cfg, &zero, &grid, &CoupledOptions::default()).unwrap();
        assert!(sol.ytilde.v.iter().all(|v| *v == 0.0));
        assert!(sol.ytilde.w.iter().all(|w| *w == 0.0));
        let p = solve_profile(&cfg, &grid).unwrap();
        assert!(sol.profile.max_abs_diff(&p).unwrap() < 1e-8);
    }

    #[test]
    fn agrees_with_integrating_factor_on_sine_flux() {
        let f = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
        let cfg = ShockConfig::from_end_states(&f, 1.2, -1.0).unwrap();
        let freq = cfg.neutral_zero(1.0).unwrap();
        let grid = Grid::new(20.0, 4000).unwrap();
        let c = solve_coupled(&cfg, &freq, &grid, &CoupledOptions::default()).unwrap();
        let p = solve_profile(&cfg, &grid).unwrap();
        let (y, _) = solve_ytilde_if(&cfg, &freq, &p, &IfOptions::default()).unwrap();
        assert!(norm2(&c.ytilde.v, &y.v) <= 1e-3);
        assert!(norm2(&c.profile.ubar, &p.ubar) <= 1e-5);
    }

    #[test]
    fn robust_in_half_width() {
        let (cfg, freq) = exact_case();
        let mut origin = Vec::new();
        for l in [10.0, 20.0, 30.0] {
            let grid = Grid::new(l, (200.0 * l) as usize).unwrap();
            let opts = CoupledOptions {
                tail_tol: 1e-3,
                ..Default::default()
            };
            let sol = solve_coupled(&cfg, &freq, &grid, &opts).unwrap();
            let o = grid.origin_index();
            // samples at x = -1, -0.5, 0.5, 1 (grid spacing 0.005)
            origin.push([o - 200, o - 100, o + 100, o + 200].map(|k| sol.ytilde.v[k]));
        }
        for w in origin.windows(2) {
            for k in 0..4 {
                assert!((w[0][k] - w[1][k]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn short_domain_fails_the_tail_check() {
        let (cfg, freq) = exact_case();
        let grid = Grid::new(1.0, 100).unwrap();
        assert!(matches!(
            solve_coupled(&cfg, &freq, &grid, &CoupledOptions::default()),
            Err(Error::TailNotResolved { .. })
        ));
    }

    #[test]
    fn continuation_chain() {
        let f = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
        let grid = Grid::new(20.0, 2000).unwrap();
        let opts = CoupledOptions::default();
        let values = [1.0, 1.1, 1.2, 1.3, 1.4, 1.5];
        let out = continuation_scan(&f, -1.0, 1.0, &values, &grid, &opts);
        assert!(out.stall.is_none(), "{:?}", out.stall);
        assert_eq!(out.points.len(), 6);
        for p in &out.points {
            let fresh = solve_coupled(&p.cfg, &p.freq, &grid, &opts).unwrap();
            assert!(norm2(&fresh.ytilde.v, &p.solution.ytilde.v) < 1e-6);
            assert!((p.solution.profile.ubar[1000] - p.cfg.midpoint()).abs() < 1e-14);
        }

        let single = continuation_scan(&f, -1.0, 1.0, &[1.2], &grid, &opts);
        let direct =
            solve_coupled(&single.points[0].cfg, &single.points[0].freq, &grid, &opts).unwrap();
        assert_eq!(single.points[0].solution.ytilde.v, direct.ytilde.v);

        let repeat = continuation_scan(&f, -1.0, 1.0, &[1.2, 1.2], &grid, &opts);
        assert!(repeat.points[1].solution.diagnostics.newton_iters <= 1);
    }

    #[test]
    fn lax_violation_stalls_and_keeps_prior_points() {
        let f = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
        let grid = Grid::new(20.0, 1000).unwrap();
        let out = continuation_scan(
            &f,
            -1.0,
            1.0,
            &[1.0, 1.1, -1.5],
            &grid,
            &CoupledOptions::default(),
        );
        assert_eq!(out.points.len(), 2);
        assert_eq!(out.stall_index(), Some(2));
        match out.stall {
            Some(Error::ContinuationStalled { source, .. }) => {
                assert!(matches!(*source, Error::LaxViolation { .. }), "{source}")
            }
            other => panic!("{other:?}"),
        }
    }
}
