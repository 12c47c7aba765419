//! Run configuration: a TOML file whose fields can be overridden from the
//! command line, resolved into validated model objects.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{FluxModel, NeutralFrequency, ScalarFlux, ShockConfig};
use crate::numerics::QuadratureRule;
use crate::profile::DEFAULT_HALF_WIDTH;
use crate::ytilde::Method;

/// Grid intervals per unit length when `intervals` is not given.
pub const DEFAULT_DENSITY: f64 = 100.0;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FluxSpec {
    /// `burgers`, `quadratic_transverse`, `sine_transverse` or `polynomial`.
    pub kind: Option<String>,
    /// `f2 = sin(frequency u)` for `sine_transverse`.
    pub frequency: Option<f64>,
    /// Monomial coefficients, lowest degree first, for `polynomial`.
    pub f1: Option<Vec<f64>>,
    pub f2: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub flux: FluxSpec,
    pub u_minus: Option<f64>,
    pub u_plus: Option<f64>,
    pub xi0: Option<f64>,
    pub tau0: Option<f64>,
    pub half_width: Option<f64>,
    pub intervals: Option<usize>,
    pub half_widths: Option<Vec<f64>>,
    /// `if`, `coupled` or `both`.
    pub method: Option<String>,
    pub quadrature: Option<String>,
    pub tail_tol: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub continuation: Option<Vec<f64>>,
}

macro_rules! take {
    ($base:ident, $over:ident; $($field:ident),*) => {
        $( if $over.$field.is_some() { $base.$field = $over.$field; } )*
    };
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merged(mut self, over: RunConfig) -> RunConfig {
        let mut flux = self.flux;
        let of = over.flux;
        take!(flux, of; kind, frequency, f1, f2);
        self.flux = flux;
        take!(self, over; u_minus, u_plus, xi0, tau0, half_width, intervals, half_widths,
              method, quadrature, tail_tol, output_dir, continuation);
        self
    }

    pub fn flux_model(&self) -> Result<FluxModel> {
        let kind = self.flux.kind.as_deref().unwrap_or("burgers");
        let no_coeffs = |m: FluxModel| {
            if self.flux.f1.is_some() || self.flux.f2.is_some() {
                Err(Error::Config(format!(
                    "flux.f1/flux.f2 only apply to kind = \"polynomial\", not `{kind}`"
                )))
            } else {
                Ok(m)
            }
        };
        match kind {
            "burgers" => no_coeffs(FluxModel::burgers()),
            "quadratic_transverse" => no_coeffs(FluxModel::quadratic_transverse()),
            "sine_transverse" => {
                let freq = self.flux.frequency.unwrap_or(4.0 * std::f64::consts::PI);
                if !freq.is_finite() {
                    return Err(Error::Config("flux.frequency must be finite".into()));
                }
                no_coeffs(FluxModel::sine_transverse(freq))
            }
            "polynomial" | "custom" => {
                let f1 = self.flux.f1.clone().ok_or_else(|| {
                    Error::Config("flux.f1 is required for polynomial fluxes".into())
                })?;
                let f2 = self.flux.f2.clone().unwrap_or_else(|| vec![0.0]);
                if f1.is_empty() || f1.iter().chain(&f2).any(|c| !c.is_finite()) {
                    return Err(Error::Config(
                        "polynomial coefficients must be finite".into(),
                    ));
                }
                Ok(FluxModel::custom(
                    ScalarFlux::Polynomial(f1),
                    ScalarFlux::Polynomial(f2),
                ))
            }
            other => Err(Error::Config(format!("unknown flux.kind `{other}`"))),
        }
    }

    pub fn methods(&self) -> Result<Vec<Method>> {
        match self.method.as_deref().unwrap_or("both") {
            "both" => Ok(vec![Method::IntegratingFactor, Method::Coupled]),
            m => Ok(vec![m.parse()?]),
        }
    }

    pub fn quadrature_rule(&self) -> Result<QuadratureRule> {
        self.quadrature.as_deref().unwrap_or("trapezoid").parse()
    }

    fn required(v: Option<f64>, name: &str) -> Result<f64> {
        match v {
            Some(x) if x.is_finite() => Ok(x),
            Some(x) => Err(Error::Config(format!("`{name}` must be finite, got {x}"))),
            None => Err(Error::Config(format!("missing required field `{name}`"))),
        }
    }

    pub fn u_plus(&self) -> Result<f64> {
        Self::required(self.u_plus, "u_plus")
    }

    /// `u_minus`, falling back to the first continuation value.
    pub fn u_minus(&self) -> Result<f64> {
        let first = self.continuation.as_ref().and_then(|c| c.first().copied());
        Self::required(self.u_minus.or(first), "u_minus")
    }

    pub fn shock(&self) -> Result<ShockConfig> {
        ShockConfig::from_end_states(&self.flux_model()?, self.u_minus()?, self.u_plus()?)
    }

    /// Neutral zero for `xi0` (default 1); an explicit `tau0` must be neutral.
    pub fn frequency(&self, cfg: &ShockConfig) -> Result<NeutralFrequency> {
        let xi0 = self.xi0.unwrap_or(1.0);
        match self.tau0 {
            Some(tau0) => NeutralFrequency::checked(cfg, tau0, xi0),
            None => cfg.neutral_zero(xi0),
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width.unwrap_or(DEFAULT_HALF_WIDTH)
    }

    /// Interval count per unit length implied by `half_width`/`intervals`.
    pub fn density(&self) -> f64 {
        match self.intervals {
            Some(n) => n as f64 / (2.0 * self.half_width()),
            None => DEFAULT_DENSITY,
        }
    }

    pub fn intervals(&self) -> usize {
        self.intervals
            .unwrap_or_else(|| crate::beta::intervals_for(self.half_width(), DEFAULT_DENSITY))
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.half_widths
            .clone()
            .unwrap_or_else(|| vec![self.half_width()])
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn tail_tol_or(&self, default: f64) -> Result<f64> {
        match self.tail_tol {
            Some(t) if t > 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(Error::Config(format!(
                "`tail_tol` must be positive, got {t}"
            ))),
            None => Ok(default),
        }
    }

    /// `# key = value` lines describing the run.
    pub fn describe(&self, cfg: &ShockConfig) -> Vec<(String, String)> {
        use crate::io::fmt_f64;
        let mut m = vec![
            ("flux".to_string(), cfg.flux.kind.as_str().to_string()),
            ("u_minus".into(), fmt_f64(cfg.u_minus)),
            ("u_plus".into(), fmt_f64(cfg.u_plus)),
            ("s".into(), fmt_f64(cfg.s)),
        ];
        if let Some(f) = self.flux.frequency {
            m.push(("frequency".into(), fmt_f64(f)));
        }
        m
    }
}
