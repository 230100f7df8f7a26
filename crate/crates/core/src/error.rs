use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("user position {who} = {position:?} lies outside the room")]
    OutsideRoom { who: &'static str, position: [f64; 3] },

    #[error("quadrature rule needs at least one node")]
    EmptyRule,

    #[error("integrand is not finite at node {index} (t = {node}): {value}")]
    NonFiniteIntegrand { index: usize, node: f64, value: f64 },

    #[error("analytical expressions need equal noise at Bob and Willie (got {bob} and {willie})")]
    AsymmetricNoise { bob: f64, willie: f64 },

    #[error("need {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("outage probability at rho = {rho} is zero; log undefined")]
    ZeroProbability { rho: f64 },

    #[error("need rho2 > rho1 > 0 (got rho1 = {rho1}, rho2 = {rho2})")]
    BadSnrPair { rho1: f64, rho2: f64 },

    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },

    #[error("non-finite `{field}` at SNR {snr_db} dB")]
    NonFinite { snr_db: f64, field: &'static str },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config_error(key: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        reason: reason.into(),
    }
}

pub(crate) fn io_error(path: &std::path::Path, err: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        reason: err.to_string(),
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
