//! Flux models, shock data and the Lopatinskiĭ determinant.
//!
//! The model is the viscous scalar law
//! `u_t + f1(u)_x1 + f2(u)_x2 = u_x1x1 + u_x2x2` with a planar shock joining
//! `u-` (left) to `u+` (right). Everything downstream works in the frame of
//! the shock, i.e. with the shifted longitudinal flux `f1(u) - s u`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

const RH_TOL: f64 = 1e-12;
const NEUTRAL_TOL: f64 = 1e-14;
const EQUILIBRIUM_SCAN: usize = 10_000;

type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// User supplied closed-form flux with analytic derivatives.
pub struct CustomFlux {
    pub value: Box<ScalarFn>,
    pub derivative: Box<ScalarFn>,
    pub second_derivative: Box<ScalarFn>,
}

/// A scalar flux function together with its first two derivatives.
#[derive(Clone)]
pub enum ScalarFlux {
    /// `sum_k c[k] u^k`.
    Polynomial(Vec<f64>),
    /// `amplitude * sin(frequency * u)`.
    Sine {
        amplitude: f64,
        frequency: f64,
    },
    Custom(Arc<CustomFlux>),
}

impl fmt::Debug for ScalarFlux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFlux::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            ScalarFlux::Sine {
                amplitude,
                frequency,
            } => f
                .debug_struct("Sine")
                .field("amplitude", amplitude)
                .field("frequency", frequency)
                .finish(),
            ScalarFlux::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl ScalarFlux {
    pub fn value(&self, u: f64) -> f64 {
        match self {
            ScalarFlux::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * u + ck),
            ScalarFlux::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * u).sin(),
            ScalarFlux::Custom(g) => (g.value)(u),
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match self {
            ScalarFlux::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * u + k as f64 * ck),
            ScalarFlux::Sine {
                amplitude,
                frequency,
            } => amplitude * frequency * (frequency * u).cos(),
            ScalarFlux::Custom(g) => (g.derivative)(u),
        }
    }

    pub fn second_derivative(&self, u: f64) -> f64 {
        match self {
            ScalarFlux::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(2)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * u + (k * (k - 1)) as f64 * ck),
            ScalarFlux::Sine {
                amplitude,
                frequency,
            } => -amplitude * frequency * frequency * (frequency * u).sin(),
            ScalarFlux::Custom(g) => (g.second_derivative)(u),
        }
    }

    /// Central-difference consistency of the supplied derivatives on `[lo, hi]`.
    pub fn check_derivatives(&self, lo: f64, hi: f64) -> Result<()> {
        const POINTS: usize = 41;
        for k in 0..POINTS {
            let u = lo + (hi - lo) * k as f64 / (POINTS - 1) as f64;
            let h = 1e-4 * (1.0 + u.abs());
            let fd = (self.value(u + h) - self.value(u - h)) / (2.0 * h);
            let a = self.derivative(u);
            if !a.is_finite() || (a - fd).abs() > 1e-5 * (1.0 + a.abs()) {
                return Err(Error::FluxDerivative {
                    at: u,
                    what: "first derivative",
                });
            }
            let fd2 = (self.derivative(u + h) - self.derivative(u - h)) / (2.0 * h);
            let b = self.second_derivative(u);
            if !b.is_finite() || (b - fd2).abs() > 1e-5 * (1.0 + b.abs()) {
                return Err(Error::FluxDerivative {
                    at: u,
                    what: "second derivative",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    /// `f1 = u^2/2`, `f2 = 0`.
    Burgers,
    /// `f1 = u^2/2`, `f2 = u^2`.
    QuadraticTransverse,
    /// `f1 = u^2/2`, `f2 = sin(omega u)`.
    SineTransverse,
    Custom,
}

impl FluxKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FluxKind::Burgers => "burgers",
            FluxKind::QuadraticTransverse => "quadratic_transverse",
            FluxKind::SineTransverse => "sine_transverse",
            FluxKind::Custom => "custom",
        }
    }
}

impl fmt::Display for FluxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The pair of fluxes `(f1, f2)`.
#[derive(Debug, Clone)]
pub struct FluxModel {
    pub kind: FluxKind,
    pub longitudinal: ScalarFlux,
    pub transverse: ScalarFlux,
}

fn burgers_flux() -> ScalarFlux {
    ScalarFlux::Polynomial(vec![0.0, 0.0, 0.5])
}

impl FluxModel {
    pub fn burgers() -> Self {
        Self {
            kind: FluxKind::Burgers,
            longitudinal: burgers_flux(),
            transverse: ScalarFlux::Polynomial(vec![0.0]),
        }
    }

    pub fn quadratic_transverse() -> Self {
        Self {
            kind: FluxKind::QuadraticTransverse,
            longitudinal: burgers_flux(),
            transverse: ScalarFlux::Polynomial(vec![0.0, 0.0, 1.0]),
        }
    }

    /// Burgers longitudinal flux with `f2 = sin(frequency * u)`.
    pub fn sine_transverse(frequency: f64) -> Self {
        Self {
            kind: FluxKind::SineTransverse,
            longitudinal: burgers_flux(),
            transverse: ScalarFlux::Sine {
                amplitude: 1.0,
                frequency,
            },
        }
    }

    pub fn custom(longitudinal: ScalarFlux, transverse: ScalarFlux) -> Self {
        Self {
            kind: FluxKind::Custom,
            longitudinal,
            transverse,
        }
    }

    pub fn f1(&self, u: f64) -> f64 {
        self.longitudinal.value(u)
    }

    pub fn f2(&self, u: f64) -> f64 {
        self.transverse.value(u)
    }

    pub fn a1(&self, u: f64) -> f64 {
        self.longitudinal.derivative(u)
    }

    pub fn a2(&self, u: f64) -> f64 {
        self.transverse.derivative(u)
    }

    /// Second derivative of `f1`.
    pub fn da1(&self, u: f64) -> f64 {
        self.longitudinal.second_derivative(u)
    }

    pub fn check_derivatives(&self, lo: f64, hi: f64) -> Result<()> {
        self.longitudinal.check_derivatives(lo, hi)?;
        self.transverse.check_derivatives(lo, hi)
    }

    /// True when this is the closed-form example with `ubar = -tanh(x/2)`,
    /// `v = -xi0 x sech^2(x/2)` available.
    pub fn has_exact_solution(&self, u_minus: f64, u_plus: f64) -> bool {
        self.kind == FluxKind::QuadraticTransverse && u_minus == 1.0 && u_plus == -1.0
    }
}

/// Shock speed from the Rankine–Hugoniot condition.
pub fn rankine_hugoniot_speed(flux: &FluxModel, u_minus: f64, u_plus: f64) -> Result<f64> {
    let jump = u_plus - u_minus;
    if jump.abs() < 1e-12 {
        return Err(Error::DegenerateShock { jump: jump.abs() });
    }
    Ok((flux.f1(u_plus) - flux.f1(u_minus)) / jump)
}

/// A validated Lax shock, expressed in its own rest frame.
#[derive(Debug, Clone)]
pub struct ShockConfig {
    pub flux: FluxModel,
    pub u_minus: f64,
    pub u_plus: f64,
    pub s: f64,
}

/// Shift the longitudinal flux so that the shock is standing, validating
/// Rankine–Hugoniot, both Lax inequalities and the absence of interior
/// equilibria of the profile equation.
pub fn normalize_to_standing(
    flux: &FluxModel,
    u_minus: f64,
    u_plus: f64,
    s: f64,
) -> Result<ShockConfig> {
    let jump = u_plus - u_minus;
    if !(jump.abs() >= 1e-12) {
        return Err(Error::DegenerateShock { jump: jump.abs() });
    }
    let lo = u_minus.min(u_plus) - 1.0;
    let hi = u_minus.max(u_plus) + 1.0;
    flux.check_derivatives(lo, hi)?;

    let defect = s * jump - (flux.f1(u_plus) - flux.f1(u_minus));
    let scale = 1.0 + flux.f1(u_plus).abs() + flux.f1(u_minus).abs();
    if !(defect.abs() <= RH_TOL * scale) {
        return Err(Error::RankineHugoniot { defect });
    }

    let cfg = ShockConfig {
        flux: flux.clone(),
        u_minus,
        u_plus,
        s,
    };
    let right = cfg.a1_shifted(u_plus);
    if !(right < 0.0) {
        return Err(Error::LaxViolation {
            which: format!("a1(u+) - s = {right} is not negative"),
        });
    }
    let left = cfg.a1_shifted(u_minus);
    if !(left > 0.0) {
        return Err(Error::LaxViolation {
            which: format!("a1(u-) - s = {left} is not positive"),
        });
    }

    // The profile runs from u- to u+, so the right-hand side must carry the
    // sign of [u] strictly between the end states.
    let direction = jump.signum();
    for k in 1..=EQUILIBRIUM_SCAN {
        let u = u_minus + jump * k as f64 / (EQUILIBRIUM_SCAN + 1) as f64;
        if !(cfg.profile_rhs(u) * direction > 0.0) {
            return Err(Error::InteriorEquilibrium { at: u });
        }
    }
    Ok(cfg)
}

impl ShockConfig {
    /// Rankine–Hugoniot speed plus [`normalize_to_standing`].
    pub fn from_end_states(flux: &FluxModel, u_minus: f64, u_plus: f64) -> Result<Self> {
        let s = rankine_hugoniot_speed(flux, u_minus, u_plus)?;
        normalize_to_standing(flux, u_minus, u_plus, s)
    }

    pub fn f1_shifted(&self, u: f64) -> f64 {
        self.flux.f1(u) - self.s * u
    }

    pub fn a1_shifted(&self, u: f64) -> f64 {
        self.flux.a1(u) - self.s
    }

    /// Right-hand side of the once-integrated profile equation,
    /// `ubar' = f1s(ubar) - f1s(u-)`.
    pub fn profile_rhs(&self, u: f64) -> f64 {
        (self.flux.f1(u) - self.flux.f1(self.u_minus)) - self.s * (u - self.u_minus)
    }

    pub fn jump_u(&self) -> f64 {
        self.u_plus - self.u_minus
    }

    pub fn jump_f2(&self) -> f64 {
        self.flux.f2(self.u_plus) - self.flux.f2(self.u_minus)
    }

    /// Phase anchor `ubar(0)`.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.u_plus + self.u_minus)
    }

    /// `Delta(lambda, xi) = lambda [u] + i xi [f2(u)]`.
    pub fn lopatinskii(&self, lambda: Complex64, xi: f64) -> Complex64 {
        lambda * self.jump_u() + Complex64::new(0.0, xi * self.jump_f2())
    }

    /// `d Delta / d lambda = [u]`.
    pub fn lopatinskii_dlambda(&self) -> f64 {
        self.jump_u()
    }

    /// The neutral zero on the line through `xi0`.
    pub fn neutral_zero(&self, xi0: f64) -> Result<NeutralFrequency> {
        let jump = self.jump_u();
        if jump == 0.0 {
            return Err(Error::DegenerateShock { jump: 0.0 });
        }
        let tau0 = -xi0 * self.jump_f2() / jump;
        Ok(NeutralFrequency { tau0, xi0 })
    }
}

/// A boundary zero `(i tau0, xi0)` of the Lopatinskiĭ determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralFrequency {
    pub tau0: f64,
    pub xi0: f64,
}

impl NeutralFrequency {
    /// Accept an explicit `(tau0, xi0)` only if it annihilates `Delta`.
    pub fn checked(cfg: &ShockConfig, tau0: f64, xi0: f64) -> Result<Self> {
        let residual = cfg.lopatinskii(Complex64::new(0.0, tau0), xi0).norm();
        let scale = 1.0 + (tau0 * cfg.jump_u()).abs() + (xi0 * cfg.jump_f2()).abs();
        if !(residual <= NEUTRAL_TOL * scale) {
            return Err(Error::NotNeutral { residual });
        }
        Ok(Self { tau0, xi0 })
    }

    pub fn lambda(&self) -> Complex64 {
        Complex64::new(0.0, self.tau0)
    }
}
