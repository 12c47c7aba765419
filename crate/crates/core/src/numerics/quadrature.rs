//! Composite quadrature on uniformly spaced samples.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    #[default]
    Trapezoid,
    Simpson,
}

impl QuadratureRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuadratureRule::Trapezoid => "trapezoid",
            QuadratureRule::Simpson => "simpson",
        }
    }
}

impl std::str::FromStr for QuadratureRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trapezoid" => Ok(QuadratureRule::Trapezoid),
            "simpson" => Ok(QuadratureRule::Simpson),
            other => Err(Error::Config(format!("unknown quadrature rule `{other}`"))),
        }
    }
}

pub fn quad_trapezoid(samples: &[f64], h: f64) -> Result<f64> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::BadSampleCount {
            got: n,
            need: "at least 2",
        });
    }
    let inner: f64 = samples[1..n - 1].iter().sum();
    Ok(h * (0.5 * (samples[0] + samples[n - 1]) + inner))
}

pub fn quad_simpson(samples: &[f64], h: f64) -> Result<f64> {
    let n = samples.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::BadSampleCount {
            got: n,
            need: "an odd count of at least 3",
        });
    }
    let mut acc = samples[0] + samples[n - 1];
    for (i, v) in samples.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(acc * h / 3.0)
}

/// Either rule, applied to a full sample vector.
pub fn quad(rule: QuadratureRule, samples: &[f64], h: f64) -> Result<f64> {
    match rule {
        QuadratureRule::Trapezoid => quad_trapezoid(samples, h),
        QuadratureRule::Simpson => quad_simpson(samples, h),
    }
}

/// Running integral from the first sample: Simpson over every even prefix,
/// plus a single trapezoid panel on top of the preceding even prefix for
/// odd prefixes. `h` may be negative (integration towards the left).
pub fn cumquad_simpson(samples: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::BadSampleCount {
            got: n,
            need: "at least 2",
        });
    }
    let mut out = vec![0.0; n];
    let mut even = 0.0;
    for k in 1..n {
        if k % 2 == 0 {
            even += h / 3.0 * (samples[k - 2] + 4.0 * samples[k - 1] + samples[k]);
            out[k] = even;
        } else {
            out[k] = even + 0.5 * h * (samples[k - 1] + samples[k]);
        }
    }
    Ok(out)
}

pub fn cumquad_trapezoid(samples: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::BadSampleCount {
            got: n,
            need: "at least 2",
        });
    }
    let mut out = vec![0.0; n];
    for k in 1..n {
        out[k] = out[k - 1] + 0.5 * h * (samples[k - 1] + samples[k]);
    }
    Ok(out)
}

pub fn cumquad(rule: QuadratureRule, samples: &[f64], h: f64) -> Result<Vec<f64>> {
    match rule {
        QuadratureRule::Trapezoid => cumquad_trapezoid(samples, h),
        QuadratureRule::Simpson => cumquad_simpson(samples, h),
    }
}
