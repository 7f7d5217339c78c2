use thiserror::Error;

use crate::spectral::EigenResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The offset distance reaches a focal point of the surface.
    #[error("singular offset: t = {t} reaches the critical distance {critical_t}")]
    Singularity { t: f64, critical_t: f64 },

    #[error("offset t = {t} is beyond the embeddedness horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error(
        "quadrature did not converge: error estimate {achieved:e} exceeds {requested:e} \
         after {intervals} intervals"
    )]
    Quadrature {
        requested: f64,
        achieved: f64,
        intervals: usize,
    },

    #[error("ode integration failed: {0}")]
    Ode(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate triangle {index} (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("S3OFF parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: Box<EigenResult>,
    },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("report schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that originate from mesh input or mesh quality.
    pub fn is_mesh_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidMesh(_)
                | Error::DegenerateTriangle { .. }
                | Error::Parse { .. }
                | Error::Configuration(_)
        )
    }

    /// Errors raised by the numerical solvers.
    pub fn is_solver_error(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Quadrature { .. } | Error::Ode(_)
        )
    }
}
