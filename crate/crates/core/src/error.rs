use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow evaluating {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("solution blew up at s = {s}")]
    BlowUp { s: f64 },
    #[error("monodromy solve did not converge at s = {s} (residual {residual:e})")]
    MonodromyNotConverged { s: f64, residual: f64 },
    #[error("s = {s} outside validity interval [{lo}, {hi}]")]
    OutOfValidity { s: f64, lo: f64, hi: f64 },
    #[error("continuation failure at x = {x}: real-structure defect {defect:e}")]
    ContinuationFailure { x: f64, defect: f64 },
    #[error("Airy zero within 1e-6 of {0}")]
    PoleNearby(f64),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("quadrature not converged (estimated error {0:e})")]
    NotConverged(f64),
    #[error("point lies on a contour ray")]
    OnContour,
    #[error("unsupported potential: {0}")]
    UnsupportedPotential(String),
    #[error("recurrence quadrature not converged (beta change {0:e})")]
    QuadratureNotConverged(f64),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "Domain",
            Error::Overflow(_) => "Overflow",
            Error::InvalidInput(_) => "InvalidInput",
            Error::BlowUp { .. } => "BlowUp",
            Error::MonodromyNotConverged { .. } => "MonodromyNotConverged",
            Error::OutOfValidity { .. } => "OutOfValidity",
            Error::ContinuationFailure { .. } => "ContinuationFailure",
            Error::PoleNearby(_) => "PoleNearby",
            Error::Integration(_) => "Integration",
            Error::NotConverged(_) => "NotConverged",
            Error::OnContour => "OnContour",
            Error::UnsupportedPotential(_) => "UnsupportedPotential",
            Error::QuadratureNotConverged(_) => "QuadratureNotConverged",
            Error::Io(_) => "Io",
            Error::CheckFailed(_) => "CheckFailed",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
