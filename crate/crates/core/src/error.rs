use thiserror::Error;

use crate::variational::SolveOutcome;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular deformation gradient (det = {det:e})")]
    SingularGradient { det: f64 },

    #[error("argument outside the energy domain: {0}")]
    Domain(String),

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("analytic {0} not available")]
    NotAvailable(&'static str),

    #[error("inadmissible field: det F = {det:e} at cell {cell}, quadrature point {qp}")]
    InadmissibleField { cell: usize, qp: usize, det: f64 },

    #[error("boundary data admits no orientation-preserving affine extension: det F = {det:e} at cell {cell}, quadrature point {qp}")]
    InadmissibleBoundary { cell: usize, qp: usize, det: f64 },

    #[error("solver exhausted its budget after {} iterations (residual {:e})", .0.iterations, .0.residual_norm)]
    SolverNoConvergence(Box<SolveOutcome>),

    #[error("convexity evidence does not support convexity in C: {0}")]
    NotConvexEvidence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
