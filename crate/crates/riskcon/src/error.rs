use thiserror::Error;

/// Errors produced by estimators, bound formulas and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty sample")]
    EmptySample,

    #[error("level must lie in (0,1), got {0}")]
    InvalidLevel(f64),

    #[error("root bracketing failed; final bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("bound not applicable: {0}")]
    BoundNotApplicable(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("true risk unavailable: {0}")]
    TrueRiskUnavailable(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
