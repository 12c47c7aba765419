//! Integrators, quadrature and linear algebra used by the solvers.

pub mod banded;
pub mod bvp;
pub mod ivp;
pub mod quadrature;

pub use banded::BandMatrix;
pub use bvp::{bvp_solve, BvpOptions, BvpProblem, BvpSolution, BvpSystem, FnSystem, LobattoScheme};
pub use ivp::{ivp_solve, IvpProblem, Stepping, Trajectory};
pub use quadrature::{
    cumquad, cumquad_simpson, cumquad_trapezoid, quad, quad_simpson, quad_trapezoid, QuadratureRule,
};
