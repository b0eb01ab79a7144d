use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain mismatch: xi0 = {left} vs xi0 = {right}")]
    DomainMismatch { left: f64, right: f64 },

    #[error("quadrature did not converge: achieved error estimate {estimate:.3e} > tolerance {tolerance:.3e}")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),

    #[error("degenerate heat source: gamma = 0, temperature scale undefined")]
    DegenerateSource,

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
