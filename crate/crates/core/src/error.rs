use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// The CLI prints [`Error::name`] alongside the message, so variant names are
/// part of the user-facing surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("risk has no atoms")]
    EmptyLottery,
    #[error("probability {probability} of outcome {outcome} is not positive")]
    NonPositiveProbability { outcome: f64, probability: f64 },
    #[error("probabilities sum to {total}, expected 1")]
    MassNotOne { total: f64 },
    #[error("probabilities sum to {total}, which exceeds 1")]
    MassExceedsOne { total: f64 },
    #[error("spread risk has mean {mean}, expected 0")]
    NotZeroMean { mean: f64 },
    #[error("parameter {name} = {value} is out of range: {expected}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("branch at {outcome} carries mass {available}, spread needs {required}")]
    InsufficientBranchMass {
        outcome: f64,
        available: f64,
        required: f64,
    },
    #[error("outcome ordering violated: {0}")]
    OrderingViolated(String),
    #[error("dual moment order must be at least 1, got {0}")]
    BadOrder(u32),
    #[error("gini coefficient undefined for mean {mean}")]
    ZeroMeanGini { mean: f64 },
    #[error("{function} is not defined at {at}")]
    DomainViolation { function: String, at: f64 },
    #[error("{function} does not attain the value {value}")]
    RangeViolation { function: String, value: f64 },
    #[error("root is not bracketed by [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("premium {lambda} does not solve the indifference equation (residual {residual})")]
    InconsistentLambda { lambda: f64, residual: f64 },
    #[error("quadruple ({0}, {1}, {2}, {3}) is not ordered as v < w <= x < y")]
    BadQuadruple(f64, f64, f64, f64),
    #[error("h(p0) = {weight} differs from the zero-participation weight {target}")]
    NotAtZeroParticipation { weight: f64, target: f64 },
    #[error("sample count {0} is below the minimum of 100")]
    BadSampleCount(usize),
    #[error("cannot parse {kind} spec '{spec}': {reason}")]
    BadSpec {
        kind: &'static str,
        spec: String,
        reason: String,
    },
}

impl Error {
    /// Stable variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyLottery => "EmptyLottery",
            Error::NonPositiveProbability { .. } => "NonPositiveProbability",
            Error::MassNotOne { .. } => "MassNotOne",
            Error::MassExceedsOne { .. } => "MassExceedsOne",
            Error::NotZeroMean { .. } => "NotZeroMean",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::InsufficientBranchMass { .. } => "InsufficientBranchMass",
            Error::OrderingViolated(_) => "OrderingViolated",
            Error::BadOrder(_) => "BadOrder",
            Error::ZeroMeanGini { .. } => "ZeroMeanGini",
            Error::DomainViolation { .. } => "DomainViolation",
            Error::RangeViolation { .. } => "RangeViolation",
            Error::NoBracket { .. } => "NoBracket",
            Error::InconsistentLambda { .. } => "InconsistentLambda",
            Error::BadQuadruple(..) => "BadQuadruple",
            Error::NotAtZeroParticipation { .. } => "NotAtZeroParticipation",
            Error::BadSampleCount(_) => "BadSampleCount",
            Error::BadSpec { .. } => "BadSpec",
        }
    }

    pub(crate) fn param(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::ParamOutOfRange {
            name,
            value,
            expected,
        }
    }
}
