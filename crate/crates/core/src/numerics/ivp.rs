//! Explicit Dormand–Prince 5(4) integrator with dense output.
//!
//! Two stepping modes share one tableau: adaptive error control on the
//! embedded 4th-order solution, and fixed uniform steps that land exactly on
//! a prescribed grid (used where the caller wants grid-aligned samples and
//! a clean `h^5` error law).

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

#[cfg(test)]
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// `b - b_hat` (5th minus embedded 4th order weights).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dense-output polynomial coefficients: `y(t + theta h) = y + h K^T P [theta, theta^2, theta^3, theta^4]`.
const P: [[f64; 4]; 7] = [
    [
        1.0,
        -8048581381.0 / 2820520608.0,
        8663915743.0 / 2820520608.0,
        -12715105075.0 / 11282082432.0,
    ],
    [0.0, 0.0, 0.0, 0.0],
    [
        0.0,
        131558114200.0 / 32700410799.0,
        -68118460800.0 / 10900136933.0,
        87487479700.0 / 32700410799.0,
    ],
    [
        0.0,
        -1754552775.0 / 470086768.0,
        14199869525.0 / 1410260304.0,
        -10690763975.0 / 1880347072.0,
    ],
    [
        0.0,
        127303824393.0 / 49829197408.0,
        -318862633887.0 / 49829197408.0,
        701980252875.0 / 199316789632.0,
    ],
    [
        0.0,
        -282668133.0 / 205662961.0,
        2019193451.0 / 616988883.0,
        -1453857185.0 / 822651844.0,
    ],
    [
        0.0,
        40617522.0 / 29380423.0,
        -110615467.0 / 29380423.0,
        69997945.0 / 29380423.0,
    ],
];

pub const ORDER: usize = 5;

const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stepping {
    /// Error-controlled steps, never longer than `max_step`.
    Adaptive { max_step: f64 },
    /// `steps` equal steps from `t0` to `t1`; tolerances are ignored.
    Fixed { steps: usize },
}

/// An initial-value problem `y' = rhs(t, y)`, `y(t0) = y0`, integrated to `t1`
/// (which may lie to the left of `t0`).
pub struct IvpProblem<F> {
    pub rhs: F,
    pub t0: f64,
    pub t1: f64,
    pub y0: Vec<f64>,
    pub rtol: f64,
    pub atol: f64,
    pub stepping: Stepping,
}

impl<F> IvpProblem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, t_span: (f64, f64), y0: Vec<f64>) -> Self {
        Self {
            rhs,
            t0: t_span.0,
            t1: t_span.1,
            y0,
            rtol: 1e-8,
            atol: 1e-10,
            stepping: Stepping::Adaptive {
                max_step: f64::INFINITY,
            },
        }
    }

    pub fn tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn max_step(mut self, max_step: f64) -> Self {
        self.stepping = Stepping::Adaptive { max_step };
        self
    }

    pub fn fixed_steps(mut self, steps: usize) -> Self {
        self.stepping = Stepping::Fixed { steps };
        self
    }

    pub fn dim(&self) -> usize {
        self.y0.len()
    }

    fn validate(&self) -> Result<()> {
        if self.y0.is_empty() {
            return Err(Error::BadProblem("empty initial state".into()));
        }
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::BadProblem("rtol and atol must be positive".into()));
        }
        if !(self.t0.is_finite() && self.t1.is_finite()) || self.t0 == self.t1 {
            return Err(Error::BadProblem("empty or non-finite time span".into()));
        }
        if self.y0.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadProblem("non-finite initial state".into()));
        }
        if let Stepping::Fixed { steps: 0 } = self.stepping {
            return Err(Error::BadProblem(
                "fixed stepping needs at least one step".into(),
            ));
        }
        Ok(())
    }
}

/// Accepted steps plus the stage data needed for dense output.
#[derive(Debug, Clone)]
pub struct Trajectory {
    dim: usize,
    /// Step endpoints, `t[0] = t0`, last entry `t1`.
    pub t: Vec<f64>,
    /// States at `t`.
    pub y: Vec<Vec<f64>>,
    /// Seven stage derivatives per step, flattened.
    stages: Vec<f64>,
    pub rhs_evals: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> usize {
        self.t.len() - 1
    }

    pub fn final_state(&self) -> &[f64] {
        self.y.last().expect("trajectory has at least one state")
    }

    fn forward(&self) -> bool {
        self.t[self.t.len() - 1] > self.t[0]
    }

    /// Dense output at `t` (clamped to the integration interval).
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let n = self.steps();
        let fwd = self.forward();
        let key = |s: f64| if fwd { s } else { -s };
        let target = key(t);
        // index of the step containing t
        let mut lo = 0;
        let mut hi = n;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if key(self.t[mid]) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let i = lo.min(n - 1);
        let t0 = self.t[i];
        let h = self.t[i + 1] - t0;
        let theta = ((t - t0) / h).clamp(0.0, 1.0);
        if theta == 0.0 {
            return self.y[i].clone();
        }
        if theta == 1.0 {
            return self.y[i + 1].clone();
        }
        let powers = [theta, theta * theta, theta.powi(3), theta.powi(4)];
        let m = self.dim;
        let k = &self.stages[i * 7 * m..(i + 1) * 7 * m];
        let mut out = self.y[i].clone();
        for (s, row) in P.iter().enumerate() {
            let w: f64 = row.iter().zip(powers.iter()).map(|(p, q)| p * q).sum();
            if w == 0.0 {
                continue;
            }
            for j in 0..m {
                out[j] += h * w * k[s * m + j];
            }
        }
        out
    }
}

struct Workspace {
    k: Vec<Vec<f64>>,
    tmp: Vec<f64>,
    y_new: Vec<f64>,
}

impl Workspace {
    fn new(m: usize) -> Self {
        Self {
            k: vec![vec![0.0; m]; 7],
            tmp: vec![0.0; m],
            y_new: vec![0.0; m],
        }
    }
}

/// One Dormand–Prince step from `(t, y)` with `k[0] = f(t, y)` already filled.
/// Leaves the 5th-order solution in `ws.y_new` and `f(t+h, y_new)` in `ws.k[6]`.
fn dp_step<F>(rhs: &F, t: f64, y: &[f64], h: f64, ws: &mut Workspace) -> usize
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let m = y.len();
    for s in 1..7 {
        for j in 0..m {
            let mut acc = 0.0;
            for (r, a) in A[s].iter().enumerate().take(s) {
                acc += a * ws.k[r][j];
            }
            ws.tmp[j] = y[j] + h * acc;
        }
        rhs(t + C[s] * h, &ws.tmp, &mut ws.k[s]);
    }
    // A[6] equals B, so the last stage argument is the 5th-order solution.
    ws.y_new.copy_from_slice(&ws.tmp);
    6
}

fn scaled_error(ws: &Workspace, y: &[f64], h: f64, rtol: f64, atol: f64) -> f64 {
    let m = y.len();
    let mut sum = 0.0;
    for j in 0..m {
        let e: f64 = (0..7).map(|s| E[s] * ws.k[s][j]).sum::<f64>() * h;
        let sc = atol + rtol * y[j].abs().max(ws.y_new[j].abs());
        sum += (e / sc).powi(2);
    }
    (sum / m as f64).sqrt()
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrate `p` and return the full trajectory.
pub fn ivp_solve<F>(p: &IvpProblem<F>) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    p.validate()?;
    let m = p.dim();
    let mut ws = Workspace::new(m);
    let mut traj = Trajectory {
        dim: m,
        t: vec![p.t0],
        y: vec![p.y0.clone()],
        stages: Vec::new(),
        rhs_evals: 0,
        rejected_steps: 0,
    };
    let mut y = p.y0.clone();
    let mut t = p.t0;
    (p.rhs)(t, &y, &mut ws.k[0]);
    traj.rhs_evals += 1;
    if !finite(&ws.k[0]) {
        return Err(Error::IntegratorFailure(format!(
            "non-finite rhs at t = {t}"
        )));
    }
    let span = p.t1 - p.t0;
    let dir = span.signum();

    let push = |traj: &mut Trajectory, ws: &Workspace, t_new: f64| {
        for s in 0..7 {
            traj.stages.extend_from_slice(&ws.k[s]);
        }
        traj.t.push(t_new);
        traj.y.push(ws.y_new.clone());
    };

    match p.stepping {
        Stepping::Fixed { steps } => {
            for i in 0..steps {
                // Endpoints computed from the index so that grid nodes are hit exactly.
                let t_next = if i + 1 == steps {
                    p.t1
                } else {
                    p.t0 + span * ((i + 1) as f64 / steps as f64)
                };
                let h = t_next - t;
                traj.rhs_evals += dp_step(&p.rhs, t, &y, h, &mut ws);
                if !finite(&ws.k[6]) || !finite(&ws.y_new) {
                    return Err(Error::IntegratorFailure(format!(
                        "non-finite state near t = {t_next}"
                    )));
                }
                push(&mut traj, &ws, t_next);
                t = t_next;
                y.copy_from_slice(&ws.y_new);
                let last = ws.k[6].clone();
                ws.k[0].copy_from_slice(&last);
            }
        }
        Stepping::Adaptive { max_step } => {
            let max_step = max_step.min(span.abs());
            let mut h = initial_step(p, &y, &ws.k[0], max_step);
            traj.rhs_evals += 2;
            let mut steps = 0usize;
            while (p.t1 - t) * dir > 0.0 {
                steps += 1;
                if steps > MAX_STEPS {
                    return Err(Error::IntegratorFailure("step budget exhausted".into()));
                }
                let min_step = 16.0 * f64::EPSILON * t.abs().max(1.0);
                if h < min_step {
                    return Err(Error::IntegratorFailure(format!(
                        "step size underflow at t = {t}"
                    )));
                }
                let mut hs = h.min(max_step);
                let last = (t + dir * hs - p.t1) * dir >= 0.0;
                if last {
                    hs = (p.t1 - t).abs();
                }
                let t_new = if last { p.t1 } else { t + dir * hs };
                traj.rhs_evals += dp_step(&p.rhs, t, &y, dir * hs, &mut ws);
                let err = if finite(&ws.k[6]) && finite(&ws.y_new) {
                    scaled_error(&ws, &y, hs, p.rtol, p.atol)
                } else {
                    f64::INFINITY
                };
                if err <= 1.0 {
                    push(&mut traj, &ws, t_new);
                    t = t_new;
                    y.copy_from_slice(&ws.y_new);
                    let k7 = ws.k[6].clone();
                    ws.k[0].copy_from_slice(&k7);
                    let fac = if err == 0.0 {
                        10.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 10.0)
                    };
                    h = hs * fac;
                } else {
                    traj.rejected_steps += 1;
                    let fac = if err.is_finite() {
                        (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                    } else {
                        0.1
                    };
                    h = hs * fac;
                }
            }
        }
    }
    Ok(traj)
}

/// Starting step heuristic (Hairer, Nørsett & Wanner, II.4).
fn initial_step<F>(p: &IvpProblem<F>, y0: &[f64], f0: &[f64], max_step: f64) -> f64
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let m = y0.len();
    let sc: Vec<f64> = y0.iter().map(|v| p.atol + p.rtol * v.abs()).collect();
    let norm = |v: &[f64]| {
        (v.iter()
            .zip(sc.iter())
            .map(|(a, s)| (a / s).powi(2))
            .sum::<f64>()
            / m as f64)
            .sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(max_step);
    let dir = (p.t1 - p.t0).signum();
    let y1: Vec<f64> = y0
        .iter()
        .zip(f0.iter())
        .map(|(y, f)| y + dir * h0 * f)
        .collect();
    let mut f1 = vec![0.0; m];
    (p.rhs)(p.t0 + dir * h0, &y1, &mut f1);
    let diff: Vec<f64> = f1
        .iter()
        .zip(f0.iter())
        .map(|(a, b)| (a - b) / h0)
        .collect();
    let d2 = norm(&diff);
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (1e-6f64).max(h0 * 1e-3)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / ORDER as f64)
    };
    (100.0 * h0).min(h1).min(max_step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tableau_consistency() {
        assert_eq!(A[6][..6], B[..6]);
        assert!((B.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for s in 1..7 {
            let row: f64 = A[s].iter().sum();
            assert!((row - C[s]).abs() < 1e-15, "row {s}");
        }
        // dense output reproduces the step end at theta = 1
        for s in 0..7 {
            let at_one: f64 = P[s].iter().sum();
            assert!((at_one - B[s]).abs() < 1e-14, "stage {s}");
        }
    }

    #[test]
    fn exponential_growth() {
        let p = IvpProblem::new(
            |_, y: &[f64], dy: &mut [f64]| dy[0] = y[0],
            (0.0, 1.0),
            vec![1.0],
        );
        let tr = ivp_solve(&p).unwrap();
        let e = std::f64::consts::E;
        assert!((tr.final_state()[0] - e).abs() <= 1e-8 * e);
    }

    #[test]
    fn burgers_profile_ivp() {
        let p = IvpProblem::new(
            |_, y: &[f64], dy: &mut [f64]| dy[0] = 0.5 * (y[0] * y[0] - 1.0),
            (0.0, 2.0),
            vec![0.0],
        );
        let tr = ivp_solve(&p).unwrap();
        assert!((tr.final_state()[0] + 1f64.tanh()).abs() < 1e-8);
        // dense output inside the span
        for x in [0.1, 0.77, 1.3, 1.99] {
            assert!(
                (tr.eval(x)[0] + (x / 2.0f64).tanh()).abs() < 1e-8,
                "x = {x}"
            );
        }
    }

    #[test]
    fn backward_integration() {
        let p = IvpProblem::new(
            |_, y: &[f64], dy: &mut [f64]| dy[0] = 0.5 * (y[0] * y[0] - 1.0),
            (0.0, -3.0),
            vec![0.0],
        );
        let tr = ivp_solve(&p).unwrap();
        assert!((tr.final_state()[0] - 1.5f64.tanh()).abs() < 1e-8);
        assert!((tr.eval(-1.0)[0] - 0.5f64.tanh()).abs() < 1e-8);
    }

    #[test]
    fn identity_flow() {
        let p = IvpProblem::new(
            |_, _: &[f64], dy: &mut [f64]| dy[0] = 0.0,
            (0.0, 5.0),
            vec![3.25],
        );
        let tr = ivp_solve(&p).unwrap();
        assert!(tr.y.iter().all(|y| y[0] == 3.25));
    }

    #[test]
    fn fixed_steps_hit_the_grid() {
        let p = IvpProblem::new(
            |_, y: &[f64], dy: &mut [f64]| dy[0] = -y[0],
            (0.0, 2.0),
            vec![1.0],
        )
        .fixed_steps(8);
        let tr = ivp_solve(&p).unwrap();
        assert_eq!(tr.t.len(), 9);
        assert_eq!(tr.t[8], 2.0);
        assert_eq!(tr.t[4], 1.0);
    }

    #[test]
    fn nan_rhs_fails() {
        let p = IvpProblem::new(
            |t, _: &[f64], dy: &mut [f64]| dy[0] = if t > 0.5 { f64::NAN } else { 1.0 },
            (0.0, 1.0),
            vec![0.0],
        );
        assert!(matches!(ivp_solve(&p), Err(Error::IntegratorFailure(_))));
    }

    #[test]
    fn blow_up_underflows() {
        // y' = y^2, y(0) = 1 blows up at t = 1
        let p = IvpProblem::new(
            |_, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0],
            (0.0, 2.0),
            vec![1.0],
        );
        assert!(matches!(ivp_solve(&p), Err(Error::IntegratorFailure(_))));
    }

    #[test]
    fn rejects_bad_tolerances() {
        let p = IvpProblem::new(
            |_, _: &[f64], dy: &mut [f64]| dy[0] = 0.0,
            (0.0, 1.0),
            vec![0.0],
        )
        .tolerances(0.0, 1e-9);
        assert!(matches!(ivp_solve(&p), Err(Error::BadProblem(_))));
    }

    #[test]
    fn fixed_step_convergence_order() {
        let err = |n: usize| {
            let p = IvpProblem::new(
                |_, y: &[f64], dy: &mut [f64]| dy[0] = y[0],
                (0.0, 1.0),
                vec![1.0],
            )
            .fixed_steps(n);
            (ivp_solve(&p).unwrap().final_state()[0] - 1f64.exp()).abs()
        };
        let (e1, e2, e3) = (err(4), err(8), err(16));
        let p1 = (e1 / e2).log2();
        let p2 = (e2 / e3).log2();
        assert!(p1 >= 4.0 && p2 >= 4.0, "orders {p1} {p2}");
    }
}
