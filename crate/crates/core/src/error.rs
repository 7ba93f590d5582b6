use thiserror::Error;

/// Errors raised by the contour library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("marginal alpha must be < 0.5 (got {alpha}); the contour radius would be <= 0")]
    DegenerateContour { alpha: f64 },

    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: &'static str, detail: String },

    #[error("state ({x1}, {x2}) maps to a CDF value of exactly 0 or 1")]
    OutOfRange { x1: f64, x2: f64 },

    #[error("insufficient sample: need {needed} points, have {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error("halfplane intersection is empty")]
    EmptyIntersection,

    #[error("{method} contours are defined by a {expected} exceedance probability, got {got}")]
    SpecKindMismatch {
        method: &'static str,
        expected: &'static str,
        got: &'static str,
    },

    #[error("coordinate mismatch: response expects {expected}, contour is in {got}")]
    CoordinateMismatch { expected: String, got: String },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
