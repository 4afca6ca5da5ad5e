use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("no convergence: best estimate {best:e}, error estimate {error_estimate:e} after {evaluations} evaluations")]
    Convergence {
        best: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-integrable tail: {0}")]
    NonIntegrable(String),

    #[error("unknown name `{0}`")]
    NotFound(String),

    #[error("route `{route}` is not available for operator `{op}`")]
    Capability { op: String, route: String },

    #[error("insufficient decay, tail mass {0:e}")]
    InsufficientDecay(f64),

    #[error("spectrum is not conjugate-symmetric (residual {0:e})")]
    NonSymmetric(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
