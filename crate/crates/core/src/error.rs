use thiserror::Error;

/// Errors raised by the simulator, the estimators and the closed-form laws.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("attachment on empty population")]
    EmptyAttachment,
    #[error("least_fit on empty population")]
    EmptyLeastFit,
    #[error("no sites")]
    NoSites,
    #[error("empty histogram")]
    EmptyHistogram,
    #[error("limit CDF undefined for f_c >= 1")]
    LimitCdfUndefined,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no focal mutant")]
    NoFocalMutant,
    #[error("law not normalizable: {0}")]
    NotNormalizable(String),
    #[error("observer failed at step {step}: {message}")]
    Observer { step: u64, message: String },
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
