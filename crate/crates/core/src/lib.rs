//! Refined viscous stability coefficient β for planar shocks of the scalar
//! law `u_t + f1(u)_x1 + f2(u)_x2 = Δu`.
//!
//! Pipeline: [`model`] validates the shock and locates the neutral zero of
//! the Lopatinskiĭ determinant, [`profile`] computes the viscous profile,
//! [`ytilde`] builds `w + i v` either by an integrating factor or as one
//! coupled boundary value problem, and [`beta`] integrates the result.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod beta;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod model;
pub mod numerics;
pub mod profile;
pub mod ytilde;

pub use beta::{compute_beta, compute_i, run_beta, BetaOptions, BetaResult};
pub use error::{Error, Result};
pub use model::{FluxModel, NeutralFrequency, ShockConfig};
pub use profile::{Grid, ProfileSolution};
pub use ytilde::{Method, YTildeSolution};
