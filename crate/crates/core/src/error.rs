//! Error type shared by every stage of the pipeline.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate shock: end states coincide (|u+ - u-| = {jump:e})")]
    DegenerateShock { jump: f64 },

    #[error("Rankine-Hugoniot condition violated: s[u] - [f1(u)] = {defect:e}")]
    RankineHugoniot { defect: f64 },

    #[error("Lax condition violated: {which}")]
    LaxViolation { which: String },

    #[error("interior equilibrium of the profile equation near u = {at}")]
    InteriorEquilibrium { at: f64 },

    #[error("flux derivative inconsistent with finite differences at u = {at} ({what})")]
    FluxDerivative { at: f64, what: &'static str },

    #[error("frequency is not a neutral zero: |Delta(i tau0, xi0)| = {residual:e}")]
    NotNeutral { residual: f64 },

    #[error("invalid grid: {0}")]
    BadGrid(String),

    #[error(
        "TailNotResolved: endpoint residual {residual:e} exceeds tolerance {tol:e} (increase L)"
    )]
    TailNotResolved { residual: f64, tol: f64 },

    #[error("IntegratorFailure: {0}")]
    IntegratorFailure(String),

    #[error("BadSampleCount: got {got} samples, {need}")]
    BadSampleCount { got: usize, need: &'static str },

    #[error("BadProblem: {0}")]
    BadProblem(String),

    #[error("NewtonDivergence: residual {residual:e} not reduced after {iterations} iterations")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("SingularJacobian: zero pivot in column {column}")]
    SingularJacobian { column: usize },

    #[error("MeshLimitExceeded: refinement requires more than {limit} mesh points")]
    MeshLimitExceeded { limit: usize },

    #[error("GridMismatch: {0}")]
    GridMismatch(String),

    #[error("ContinuationStalled at index {index} (u- = {u_minus}): {source}")]
    ContinuationStalled {
        index: usize,
        u_minus: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Validation failures (bad inputs) as opposed to solver failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DegenerateShock { .. }
                | Error::RankineHugoniot { .. }
                | Error::LaxViolation { .. }
                | Error::InteriorEquilibrium { .. }
                | Error::FluxDerivative { .. }
                | Error::NotNeutral { .. }
                | Error::BadGrid(_)
                | Error::BadProblem(_)
                | Error::Config(_)
        )
    }
}
