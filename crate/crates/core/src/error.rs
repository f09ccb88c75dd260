use thiserror::Error;

/// Engine-level failures shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("step budget of {budget} reductions exhausted")]
    ResourceLimit { budget: usize },
    #[error("explicit group has neither a parametrization nor usable equations")]
    MissingParametrization,
    #[error("unsupported input class: {0}")]
    UnsupportedClass(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("dimension formulas disagree: direct {direct}, via double coset {via_double_coset}")]
    DimMismatch {
        direct: i64,
        via_double_coset: i64,
    },
    #[error("negative rank {0}")]
    NegativeRank(String),
    #[error("connectedness of the group could not be certified")]
    UnknownConnectedness,
    #[error("oracles disagree: jacobian {jacobian}, elimination {elimination}")]
    OracleDisagreement { jacobian: usize, elimination: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "ZeroDenominator",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::PoleAtPoint => "PoleAtPoint",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::MissingParametrization => "MissingParametrization",
            Error::UnsupportedClass(_) => "UnsupportedClass",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::DimMismatch { .. } => "DimMismatch",
            Error::NegativeRank(_) => "NegativeRank",
            Error::UnknownConnectedness => "UnknownConnectedness",
            Error::OracleDisagreement { .. } => "OracleDisagreement",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
