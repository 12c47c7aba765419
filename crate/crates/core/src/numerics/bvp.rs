//! Two-point boundary value problems by Lobatto IIIA collocation.
//!
//! On each mesh interval the solution is a polynomial of degree `s` that
//! interpolates the node values and satisfies the ODE at the `s` Lobatto
//! points (endpoints included), which makes the piecewise interpolant C¹.
//! Interior stage values are kept as unknowns; with unknowns ordered
//! interval by interval the Newton matrix is banded as long as every
//! boundary condition involves only one end of the interval. Mixed
//! conditions fall back to a full-width band on small meshes.
//!
//! After each Newton solve the defect `u' - f(x, u)` of the interpolant is
//! sampled between collocation points; intervals whose scaled defect
//! `h * |r| / (1 + |f|)` exceeds the tolerance are subdivided.

use crate::error::{Error, Result};
use crate::numerics::banded::BandMatrix;

/// A first-order system `y' = f(x, y)` with `dim()` boundary residuals.
pub trait BvpSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, x: f64, y: &[f64], dy: &mut [f64]);
    fn bc(&self, ya: &[f64], yb: &[f64]) -> Vec<f64>;
    /// Row-major `dim x dim` Jacobian of `rhs`. Returning `false` selects
    /// one-sided finite differences.
    fn jacobian(&self, _x: f64, _y: &[f64], _jac: &mut [f64]) -> bool {
        false
    }
}

/// Closure adapter for [`BvpSystem`].
pub struct FnSystem<F, B> {
    pub dim: usize,
    pub rhs: F,
    pub bc: B,
}

impl<F, B> BvpSystem for FnSystem<F, B>
where
    F: Fn(f64, &[f64], &mut [f64]),
    B: Fn(&[f64], &[f64]) -> Vec<f64>,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn rhs(&self, x: f64, y: &[f64], dy: &mut [f64]) {
        (self.rhs)(x, y, dy)
    }
    fn bc(&self, ya: &[f64], yb: &[f64]) -> Vec<f64> {
        (self.bc)(ya, yb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LobattoScheme {
    /// Lobatto IIIA, 3 stages, order 4 (cubic interpolant).
    ThreeStage,
    /// Lobatto IIIA, 4 stages, order 6 at the nodes (quartic interpolant).
    #[default]
    FourStage,
}

impl LobattoScheme {
    pub fn stages(&self) -> usize {
        match self {
            LobattoScheme::ThreeStage => 3,
            LobattoScheme::FourStage => 4,
        }
    }

    /// Nodal order of convergence.
    pub fn order(&self) -> usize {
        2 * self.stages() - 2
    }

    fn nodes(&self) -> Vec<f64> {
        match self {
            LobattoScheme::ThreeStage => vec![0.0, 0.5, 1.0],
            LobattoScheme::FourStage => {
                let r = 5f64.sqrt() / 10.0;
                vec![0.0, 0.5 - r, 0.5 + r, 1.0]
            }
        }
    }

    /// Points where the defect is sampled (never collocation points).
    fn probes(&self) -> &'static [f64] {
        match self {
            LobattoScheme::ThreeStage => &[0.25, 0.75],
            LobattoScheme::FourStage => &[0.125, 0.5, 0.875],
        }
    }
}

fn poly_eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * t + v)
}

/// Lagrange basis on the Lobatto nodes and its antiderivatives.
#[derive(Debug, Clone)]
struct Collocation {
    scheme: LobattoScheme,
    c: Vec<f64>,
    /// `a[j][k] = int_0^{c_j} l_k`.
    a: Vec<Vec<f64>>,
    basis: Vec<Vec<f64>>,
    basis_int: Vec<Vec<f64>>,
}

impl Collocation {
    fn new(scheme: LobattoScheme) -> Self {
        let c = scheme.nodes();
        let s = c.len();
        let mut basis = Vec::with_capacity(s);
        let mut basis_int = Vec::with_capacity(s);
        for k in 0..s {
            let mut p = vec![1.0];
            for j in 0..s {
                if j == k {
                    continue;
                }
                let d = c[k] - c[j];
                let mut q = vec![0.0; p.len() + 1];
                for (e, &v) in p.iter().enumerate() {
                    q[e + 1] += v / d;
                    q[e] -= v * c[j] / d;
                }
                p = q;
            }
            let mut ip = vec![0.0; p.len() + 1];
            for (e, &v) in p.iter().enumerate() {
                ip[e + 1] = v / (e + 1) as f64;
            }
            basis.push(p);
            basis_int.push(ip);
        }
        let a = c
            .iter()
            .map(|&cj| basis_int.iter().map(|b| poly_eval(b, cj)).collect())
            .collect();
        Self {
            scheme,
            c,
            a,
            basis,
            basis_int,
        }
    }

    fn s(&self) -> usize {
        self.c.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvpOptions {
    /// Bound on the scaled collocation defect.
    pub tol: f64,
    pub scheme: LobattoScheme,
    pub max_newton: usize,
    pub max_backtracks: usize,
    pub max_mesh_points: usize,
    pub max_refinements: usize,
    /// Skip defect-driven mesh refinement (fixed-mesh solves).
    pub refine: bool,
}

impl Default for BvpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            scheme: LobattoScheme::FourStage,
            max_newton: 50,
            max_backtracks: 8,
            max_mesh_points: 200_000,
            max_refinements: 30,
            refine: true,
        }
    }
}

type GuessFn<'a> = Box<dyn Fn(f64) -> Vec<f64> + 'a>;

pub struct BvpProblem<'a, S> {
    pub system: S,
    pub mesh: Vec<f64>,
    /// Initial guess at the mesh points.
    pub guess: Vec<Vec<f64>>,
    guess_fn: Option<GuessFn<'a>>,
    pub options: BvpOptions,
}

impl<'a, S: BvpSystem> BvpProblem<'a, S> {
    pub fn new(system: S, mesh: Vec<f64>, guess: Vec<Vec<f64>>) -> Result<Self> {
        let p = Self {
            system,
            mesh,
            guess,
            guess_fn: None,
            options: BvpOptions::default(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Guess given as a function; it is also sampled at interior stage points.
    pub fn with_guess_fn(
        system: S,
        mesh: Vec<f64>,
        guess: impl Fn(f64) -> Vec<f64> + 'a,
    ) -> Result<Self> {
        let samples = mesh.iter().map(|&x| guess(x)).collect();
        let mut p = Self::new(system, mesh, samples)?;
        p.guess_fn = Some(Box::new(guess));
        Ok(p)
    }

    pub fn options(mut self, options: BvpOptions) -> Self {
        self.options = options;
        self
    }

    fn validate(&self) -> Result<()> {
        let m = self.system.dim();
        if m == 0 {
            return Err(Error::BadProblem("system dimension is zero".into()));
        }
        if self.mesh.len() < 2 {
            return Err(Error::BadProblem("mesh needs at least two points".into()));
        }
        if self.mesh.iter().any(|x| !x.is_finite()) || self.mesh.windows(2).any(|w| !(w[1] > w[0]))
        {
            return Err(Error::BadProblem(
                "mesh must be finite and strictly increasing".into(),
            ));
        }
        if self.guess.len() != self.mesh.len() {
            return Err(Error::BadProblem(format!(
                "{} guess samples for {} mesh points",
                self.guess.len(),
                self.mesh.len()
            )));
        }
        if self
            .guess
            .iter()
            .any(|g| g.len() != m || g.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::BadProblem(
                "guess samples must be finite of length dim".into(),
            ));
        }
        let r = self
            .system
            .bc(&self.guess[0], &self.guess[self.guess.len() - 1]);
        if r.len() != m {
            return Err(Error::BadProblem(format!(
                "{} boundary residuals for a system of dimension {m}",
                r.len()
            )));
        }
        Ok(())
    }
}

/// Converged collocation solution with its C¹ piecewise-polynomial interpolant.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    dim: usize,
    colloc: Collocation,
    pub mesh: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    /// `f` at the `s` stages of every interval, flattened `[interval][stage][component]`.
    slopes: Vec<f64>,
    pub residual_norm: f64,
    /// Newton iterations summed over all mesh passes.
    pub newton_iters: usize,
    pub refinements: usize,
}

impl BvpSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scheme(&self) -> LobattoScheme {
        self.colloc.scheme
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.mesh.len() - 1;
        let i = match self
            .mesh
            .binary_search_by(|v| v.partial_cmp(&x).expect("finite mesh"))
        {
            Ok(i) => i.min(n - 1),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 1),
        };
        let h = self.mesh[i + 1] - self.mesh[i];
        (i, ((x - self.mesh[i]) / h).clamp(0.0, 1.0))
    }

    pub fn eval(&self, x: f64) -> Vec<f64> {
        if let Ok(i) = self
            .mesh
            .binary_search_by(|v| v.partial_cmp(&x).expect("finite mesh"))
        {
            return self.y[i].clone();
        }
        let (i, theta) = self.locate(x);
        let h = self.mesh[i + 1] - self.mesh[i];
        let m = self.dim;
        let s = self.colloc.s();
        let mut out = self.y[i].clone();
        for k in 0..s {
            let w = h * poly_eval(&self.colloc.basis_int[k], theta);
            let f = &self.slopes[(i * s + k) * m..(i * s + k + 1) * m];
            for j in 0..m {
                out[j] += w * f[j];
            }
        }
        out
    }

    /// Derivative of the interpolant. At a mesh point the one-sided value
    /// from the interval on the right is used (both agree).
    pub fn eval_derivative(&self, x: f64) -> Vec<f64> {
        let (i, theta) = self.locate(x);
        self.derivative_in(i, theta)
    }

    /// Derivative of the polynomial piece on interval `i` at local coordinate `theta`.
    pub fn derivative_in(&self, i: usize, theta: f64) -> Vec<f64> {
        let m = self.dim;
        let s = self.colloc.s();
        let mut out = vec![0.0; m];
        for k in 0..s {
            let w = poly_eval(&self.colloc.basis[k], theta);
            let f = &self.slopes[(i * s + k) * m..(i * s + k + 1) * m];
            for j in 0..m {
                out[j] += w * f[j];
            }
        }
        out
    }

    pub fn intervals(&self) -> usize {
        self.mesh.len() - 1
    }
}

/// Layout of the flat unknown vector: stage `k` of interval `i` lives at
/// `(i (s-1) + k) m`, so node `i` is stage 0 of interval `i`.
struct Layout {
    m: usize,
    s: usize,
    intervals: usize,
}

impl Layout {
    fn unknowns(&self) -> usize {
        self.m * (self.intervals * (self.s - 1) + 1)
    }
    fn stage(&self, i: usize, k: usize) -> usize {
        (i * (self.s - 1) + k) * self.m
    }
    fn node(&self, i: usize) -> usize {
        i * (self.s - 1) * self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BcSide {
    Left,
    Right,
    Mixed,
}

struct Solver<'s, S> {
    system: &'s S,
    colloc: Collocation,
    opts: BvpOptions,
}

fn fd_step(v: f64) -> f64 {
    f64::EPSILON.sqrt() * (1.0 + v.abs())
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

impl<'s, S: BvpSystem> Solver<'s, S> {
    fn jacobian_at(&self, x: f64, y: &[f64], f0: &[f64], jac: &mut [f64]) {
        if self.system.jacobian(x, y, jac) {
            return;
        }
        let m = y.len();
        let mut yp = y.to_vec();
        let mut fp = vec![0.0; m];
        for c in 0..m {
            let d = fd_step(y[c]);
            yp[c] = y[c] + d;
            self.system.rhs(x, &yp, &mut fp);
            yp[c] = y[c];
            for r in 0..m {
                jac[r * m + c] = (fp[r] - f0[r]) / d;
            }
        }
    }

    /// Boundary residuals and their Jacobians with respect to `ya` and `yb`.
    fn bc_linearization(&self, ya: &[f64], yb: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let m = ya.len();
        let r0 = self.system.bc(ya, yb);
        let mut ja = vec![0.0; m * m];
        let mut jb = vec![0.0; m * m];
        let mut p = ya.to_vec();
        for c in 0..m {
            let d = fd_step(ya[c]);
            p[c] = ya[c] + d;
            let r = self.system.bc(&p, yb);
            p[c] = ya[c];
            for row in 0..m {
                ja[row * m + c] = (r[row] - r0[row]) / d;
            }
        }
        let mut p = yb.to_vec();
        for c in 0..m {
            let d = fd_step(yb[c]);
            p[c] = yb[c] + d;
            let r = self.system.bc(ya, &p);
            p[c] = yb[c];
            for row in 0..m {
                jb[row * m + c] = (r[row] - r0[row]) / d;
            }
        }
        (r0, ja, jb)
    }

    fn classify(ja: &[f64], jb: &[f64], m: usize) -> Vec<BcSide> {
        (0..m)
            .map(|r| {
                let uses_a = ja[r * m..(r + 1) * m].iter().any(|v| *v != 0.0);
                let uses_b = jb[r * m..(r + 1) * m].iter().any(|v| *v != 0.0);
                match (uses_a, uses_b) {
                    (true, true) => BcSide::Mixed,
                    (false, true) => BcSide::Right,
                    _ => BcSide::Left,
                }
            })
            .collect()
    }

    /// Row order: left conditions, interval equations, right conditions.
    fn bc_rows(sides: &[BcSide], n: usize) -> Vec<usize> {
        let left = sides.iter().filter(|s| **s != BcSide::Right).count();
        let right_total = sides.len() - left;
        let mut next_left = 0;
        let mut next_right = n - right_total;
        sides
            .iter()
            .map(|s| {
                if *s == BcSide::Right {
                    next_right += 1;
                    next_right - 1
                } else {
                    next_left += 1;
                    next_left - 1
                }
            })
            .collect()
    }

    fn residual(&self, mesh: &[f64], z: &[f64], rows: &[usize], out: &mut [f64]) {
        let s = self.colloc.s();
        let m = self.system.dim();
        let lay = Layout {
            m,
            s,
            intervals: mesh.len() - 1,
        };
        let p = rows.iter().filter(|&&r| r < m).count();
        let mut f = vec![0.0; s * m];
        for i in 0..lay.intervals {
            let h = mesh[i + 1] - mesh[i];
            for k in 0..s {
                let o = lay.stage(i, k);
                self.system.rhs(
                    mesh[i] + self.colloc.c[k] * h,
                    &z[o..o + m],
                    &mut f[k * m..(k + 1) * m],
                );
            }
            let y0 = lay.node(i);
            for j in 1..s {
                let row = p + (i * (s - 1) + j - 1) * m;
                let yj = lay.stage(i, j);
                for r in 0..m {
                    let mut acc = 0.0;
                    for k in 0..s {
                        acc += self.colloc.a[j][k] * f[k * m + r];
                    }
                    out[row + r] = z[yj + r] - z[y0 + r] - h * acc;
                }
            }
        }
        let n = lay.unknowns();
        let bc = self.system.bc(&z[0..m], &z[n - m..n]);
        for (r, &row) in rows.iter().enumerate() {
            out[row] = bc[r];
        }
    }

    fn assemble(&self, mesh: &[f64], z: &[f64]) -> Result<(BandMatrix, Vec<usize>)> {
        let s = self.colloc.s();
        let m = self.system.dim();
        let lay = Layout {
            m,
            s,
            intervals: mesh.len() - 1,
        };
        let n = lay.unknowns();
        let (_, ja, jb) = self.bc_linearization(&z[0..m], &z[n - m..n]);
        let sides = Self::classify(&ja, &jb, m);
        let rows = Self::bc_rows(&sides, n);
        let p = rows.iter().filter(|&&r| r < m).count();
        let mixed = sides.contains(&BcSide::Mixed);
        let mut mat = if mixed {
            if n > 6000 {
                return Err(Error::BadProblem(
                    "boundary conditions coupling both ends are limited to small meshes".into(),
                ));
            }
            BandMatrix::zeros(n, n - 1, n - 1)
        } else {
            BandMatrix::zeros(n, p + (s - 1) * m - 1, s * m - 1 - p)
        };

        let mut f = vec![0.0; s * m];
        let mut jac = vec![0.0; s * m * m];
        for i in 0..lay.intervals {
            let h = mesh[i + 1] - mesh[i];
            for k in 0..s {
                let o = lay.stage(i, k);
                let x = mesh[i] + self.colloc.c[k] * h;
                let (fk, jk) = (
                    &mut f[k * m..(k + 1) * m],
                    &mut jac[k * m * m..(k + 1) * m * m],
                );
                self.system.rhs(x, &z[o..o + m], fk);
                self.jacobian_at(x, &z[o..o + m], fk, jk);
            }
            for j in 1..s {
                let row = p + (i * (s - 1) + j - 1) * m;
                for k in 0..s {
                    let col = lay.stage(i, k);
                    let diag = (j == k) as i32 as f64 - (k == 0) as i32 as f64;
                    let w = h * self.colloc.a[j][k];
                    for r in 0..m {
                        for c in 0..m {
                            let mut v = -w * jac[k * m * m + r * m + c];
                            if r == c {
                                v += diag;
                            }
                            if v != 0.0 {
                                mat.add(row + r, col + c, v);
                            }
                        }
                    }
                }
            }
        }
        for (r, &row) in rows.iter().enumerate() {
            for c in 0..m {
                let va = ja[r * m + c];
                if va != 0.0 {
                    mat.add(row, c, va);
                }
                let vb = jb[r * m + c];
                if vb != 0.0 {
                    mat.add(row, n - m + c, vb);
                }
            }
        }
        Ok((mat, rows))
    }

    /// Damped Newton on the collocation equations. Returns the iteration count.
    fn newton(&self, mesh: &[f64], z: &mut Vec<f64>) -> Result<usize> {
        let n = z.len();
        let m = self.system.dim();
        // Row placement only matters for the matrix; residual norms do not
        // depend on it, so start with an all-left ordering.
        let mut rows: Vec<usize> = (0..m).collect();
        let mut fz = vec![0.0; n];
        self.residual(mesh, z, &rows, &mut fz);
        let mut fnorm = norm2(&fz);
        let mut iters = 0;
        let mut trial = vec![0.0; n];
        let mut ftrial = vec![0.0; n];
        loop {
            if !fnorm.is_finite() {
                return Err(Error::NewtonDivergence {
                    iterations: iters,
                    residual: fnorm,
                });
            }
            let scale = 1.0 + norm_inf(z);
            if norm_inf(&fz) <= 1e-13 * scale {
                return Ok(iters);
            }
            if iters >= self.opts.max_newton {
                return Err(Error::NewtonDivergence {
                    iterations: iters,
                    residual: fnorm,
                });
            }
            let (mut mat, new_rows) = self.assemble(mesh, z)?;
            if new_rows != rows {
                rows = new_rows;
                self.residual(mesh, z, &rows, &mut fz);
            }
            mat.factor()?;
            let mut delta: Vec<f64> = fz.iter().map(|v| -v).collect();
            mat.solve_in_place(&mut delta);

            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..=self.opts.max_backtracks {
                for k in 0..n {
                    trial[k] = z[k] + lambda * delta[k];
                }
                self.residual(mesh, &trial, &rows, &mut ftrial);
                let tn = norm2(&ftrial);
                if tn.is_finite() && tn <= (1.0 - 1e-4 * lambda) * fnorm {
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            iters += 1;
            if !accepted {
                // stagnation at round-off level counts as convergence
                if norm_inf(&fz) <= 1e-10 * scale {
                    return Ok(iters - 1);
                }
                return Err(Error::NewtonDivergence {
                    iterations: iters,
                    residual: fnorm,
                });
            }
            std::mem::swap(z, &mut trial);
            std::mem::swap(&mut fz, &mut ftrial);
            fnorm = norm2(&fz);
            if lambda == 1.0 && norm_inf(&delta) <= 1e-12 * (1.0 + norm_inf(z)) {
                return Ok(iters);
            }
        }
    }

    fn solution(&self, mesh: Vec<f64>, z: &[f64]) -> BvpSolution {
        let s = self.colloc.s();
        let m = self.system.dim();
        let lay = Layout {
            m,
            s,
            intervals: mesh.len() - 1,
        };
        let mut slopes = vec![0.0; lay.intervals * s * m];
        for i in 0..lay.intervals {
            let h = mesh[i + 1] - mesh[i];
            for k in 0..s {
                let o = lay.stage(i, k);
                let dst = (i * s + k) * m;
                self.system.rhs(
                    mesh[i] + self.colloc.c[k] * h,
                    &z[o..o + m],
                    &mut slopes[dst..dst + m],
                );
            }
        }
        let y = (0..=lay.intervals)
            .map(|i| z[lay.node(i)..lay.node(i) + m].to_vec())
            .collect();
        BvpSolution {
            dim: m,
            colloc: self.colloc.clone(),
            mesh,
            y,
            slopes,
            residual_norm: f64::NAN,
            newton_iters: 0,
            refinements: 0,
        }
    }

    /// Scaled defect per interval.
    fn defects(&self, sol: &BvpSolution) -> Vec<f64> {
        let m = sol.dim;
        let probes = self.colloc.scheme.probes();
        let mut fx = vec![0.0; m];
        (0..sol.intervals())
            .map(|i| {
                let (a, b) = (sol.mesh[i], sol.mesh[i + 1]);
                let h = b - a;
                probes
                    .iter()
                    .map(|&t| {
                        let x = a + t * h;
                        let u = sol.eval(x);
                        let du = sol.derivative_in(i, t);
                        self.system.rhs(x, &u, &mut fx);
                        let r = du
                            .iter()
                            .zip(fx.iter())
                            .fold(0.0f64, |acc, (p, q)| acc.max((p - q).abs()));
                        h * r / (1.0 + norm_inf(&fx))
                    })
                    .fold(0.0f64, f64::max)
            })
            .collect()
    }
}

fn hermite(y0: &[f64], f0: &[f64], y1: &[f64], f1: &[f64], h: f64, t: f64) -> Vec<f64> {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    (0..y0.len())
        .map(|j| h00 * y0[j] + h10 * h * f0[j] + h01 * y1[j] + h11 * h * f1[j])
        .collect()
}

fn pack<S: BvpSystem>(
    system: &S,
    colloc: &Collocation,
    mesh: &[f64],
    nodes: &[Vec<f64>],
    stage_fn: Option<&dyn Fn(f64) -> Vec<f64>>,
) -> Vec<f64> {
    let m = system.dim();
    let s = colloc.s();
    let lay = Layout {
        m,
        s,
        intervals: mesh.len() - 1,
    };
    let mut z = vec![0.0; lay.unknowns()];
    let mut f0 = vec![0.0; m];
    let mut f1 = vec![0.0; m];
    for i in 0..=lay.intervals {
        z[lay.node(i)..lay.node(i) + m].copy_from_slice(&nodes[i]);
    }
    for i in 0..lay.intervals {
        let h = mesh[i + 1] - mesh[i];
        if stage_fn.is_none() {
            system.rhs(mesh[i], &nodes[i], &mut f0);
            system.rhs(mesh[i + 1], &nodes[i + 1], &mut f1);
        }
        for k in 1..s - 1 {
            let t = colloc.c[k];
            let v = match stage_fn {
                Some(g) => g(mesh[i] + t * h),
                None => hermite(&nodes[i], &f0, &nodes[i + 1], &f1, h, t),
            };
            let o = lay.stage(i, k);
            z[o..o + m].copy_from_slice(&v);
        }
    }
    z
}

pub fn bvp_solve<S: BvpSystem>(problem: &BvpProblem<'_, S>) -> Result<BvpSolution> {
    problem.validate()?;
    let opts = problem.options;
    if !(opts.tol > 0.0) {
        return Err(Error::BadProblem("tolerance must be positive".into()));
    }
    let solver = Solver {
        system: &problem.system,
        colloc: Collocation::new(opts.scheme),
        opts,
    };
    let mut mesh = problem.mesh.clone();
    if mesh.len() > opts.max_mesh_points {
        return Err(Error::MeshLimitExceeded {
            limit: opts.max_mesh_points,
        });
    }
    let mut z = pack(
        &problem.system,
        &solver.colloc,
        &mesh,
        &problem.guess,
        problem.guess_fn.as_deref(),
    );
    let mut newton_iters = 0;
    let mut refinements = 0;
    loop {
        newton_iters += solver.newton(&mesh, &mut z)?;
        let mut sol = solver.solution(mesh.clone(), &z);
        let defects = solver.defects(&sol);
        let worst = defects.iter().cloned().fold(0.0f64, f64::max);
        if worst <= opts.tol || !opts.refine {
            sol.residual_norm = worst;
            sol.newton_iters = newton_iters;
            sol.refinements = refinements;
            return Ok(sol);
        }
        if refinements >= opts.max_refinements {
            return Err(Error::MeshLimitExceeded { limit: mesh.len() });
        }
        let order = (solver.colloc.s() + 1) as f64;
        let mut new_mesh = Vec::with_capacity(mesh.len() * 2);
        for i in 0..sol.intervals() {
            let (a, b) = (mesh[i], mesh[i + 1]);
            new_mesh.push(a);
            if defects[i] > opts.tol {
                let pieces = (defects[i] / opts.tol)
                    .powf(1.0 / order)
                    .ceil()
                    .clamp(2.0, 4.0) as usize;
                for q in 1..pieces {
                    new_mesh.push(a + (b - a) * q as f64 / pieces as f64);
                }
            }
        }
        new_mesh.push(mesh[mesh.len() - 1]);
        if new_mesh.len() > opts.max_mesh_points {
            return Err(Error::MeshLimitExceeded {
                limit: opts.max_mesh_points,
            });
        }
        let nodes: Vec<Vec<f64>> = new_mesh.iter().map(|&x| sol.eval(x)).collect();
        let interp = |x: f64| sol.eval(x);
        z = pack(
            &problem.system,
            &solver.colloc,
            &new_mesh,
            &nodes,
            Some(&interp),
        );
        mesh = new_mesh;
        refinements += 1;
    }
}
