use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("invalid mass system: {0}")]
    InvalidSystem(String),

    /// A mutual distance fell below the collision floor. `sample` names the
    /// quadrature node when the failure happened inside a path evaluation.
    #[error("collision: mutual distance {distance:e} below floor{}", sample.map(|s| format!(" at sample {s}")).unwrap_or_default())]
    Collision { distance: f64, sample: Option<usize> },

    #[error("group closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("group classification failed: {0}")]
    Classification(String),

    #[error("time {0} outside the fundamental domain [0, 1]")]
    TimeOutOfRange(f64),

    #[error("symmetry violation: mismatch {mismatch:e} at {location}")]
    SymmetryViolation { mismatch: f64, location: String },

    #[error("random initialization failed after {attempts} draws")]
    InitFailure { attempts: usize },

    #[error("cannot shrink from {from} to {to} modes without truncation")]
    Truncation { from: usize, to: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Stable kebab-case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch { .. } => "shape-mismatch",
            Error::InvalidSystem(_) => "invalid-system",
            Error::Collision { .. } => "collision",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::InvalidGenerator { .. } => "invalid-generator",
            Error::Classification(_) => "classification",
            Error::TimeOutOfRange(_) => "time-out-of-range",
            Error::SymmetryViolation { .. } => "symmetry-violation",
            Error::InitFailure { .. } => "init-failure",
            Error::Truncation { .. } => "truncation",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// True for errors caused by malformed or inconsistent input rather than
    /// by the computation itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::ShapeMismatch { .. }
                | Error::InvalidSystem(_)
                | Error::InvalidGenerator { .. }
                | Error::Classification(_)
                | Error::TimeOutOfRange(_)
                | Error::Truncation { .. }
                | Error::InvalidParameter(_)
                | Error::Parse(_)
        )
    }
}
