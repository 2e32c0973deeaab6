use thiserror::Error;

/// Errors raised by fitting, testing and sampling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("value {value} is below x_min = {x_min}")]
    BelowSupport { value: u64, x_min: u64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample contains a zero; values must be positive integers")]
    ZeroValue,

    #[error(
        "likelihood is unbounded: every value equals x_min = {x_min}, so the log-likelihood increases without limit in alpha"
    )]
    UnboundedLikelihood { x_min: u64 },

    #[error("maximum-likelihood estimate {alpha} lies outside the supported range ({lower}, {upper}]")]
    Boundary { alpha: f64, lower: f64, upper: f64 },

    #[error("internal consistency: likelihood-ratio statistic {lambda} is negative beyond optimizer tolerance")]
    NegativeStatistic { lambda: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no replicate completed ({skipped} skipped)")]
    NoReplicates { skipped: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
