use thiserror::Error;

/// Errors produced by model construction, estimation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("series too short: need at least {need} observations, got {got}")]
    SeriesTooShort { need: usize, got: usize },

    #[error("degenerate series: {reason}")]
    DegenerateSeries { reason: &'static str },

    /// An estimate fell outside its admissible range (e.g. a moment
    /// estimator of alpha outside (0,1)); downstream inversion is refused.
    #[error("estimate out of admissible range: {what}")]
    OutOfRange { what: String },

    #[error("optimization failed: {reason} ({starts} starts tried)")]
    OptimizationFailed { reason: String, starts: usize },

    #[error("fixed-point iteration did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("state {state} lies outside the provided distribution (support 0..={max})")]
    UnsupportedState { state: u32, max: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 input, 3 estimation, 4 configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) | Error::SeriesTooShort { .. } => 2,
            Error::DegenerateSeries { .. }
            | Error::OutOfRange { .. }
            | Error::OptimizationFailed { .. }
            | Error::NoConvergence { .. }
            | Error::UnsupportedState { .. } => 3,
            Error::InvalidParameter { .. } | Error::Config(_) => 4,
        }
    }
}
