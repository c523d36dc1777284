use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma pole at {0}")]
    Pole(String),
    #[error("both Gamma arguments are poles ({0})")]
    BothPoles(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series does not converge: {0}")]
    NonConvergence(String),
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(
        "quadrature reached error estimate {achieved:e} (requested {requested:e}) after {evaluations} evaluations"
    )]
    QuadratureFailure {
        requested: f64,
        achieved: f64,
        evaluations: usize,
    },
    #[error("sample budget of {0} points exceeded")]
    BudgetExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
