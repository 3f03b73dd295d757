use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grand_norm::CurvePoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which half of a paired norm a failure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Time,
    Frequency,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Time => f.write_str("time"),
            Side::Frequency => f.write_str("frequency"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot evaluate at {point:?}: {reason}")]
    Evaluation { point: Vec<f64>, reason: String },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("convergence undecided: {0}")]
    Undecided(String),

    #[error("accuracy target not met: best estimate {estimate:e} with error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },

    #[error("no decay certificate: {0}")]
    NoDecayCertificate(String),

    /// The supremum defining the norm could not be certified finite.
    #[error("not in space at epsilon = {epsilon}: {reason}")]
    NotInSpace {
        epsilon: f64,
        reason: String,
        partial: Vec<CurvePoint>,
    },

    #[error("quadrature failed at epsilon = {epsilon}: {source}")]
    CurveAccuracy {
        epsilon: f64,
        partial: Vec<CurvePoint>,
        source: Box<Error>,
    },

    #[error("{side} side: {source}")]
    Side { side: Side, source: Box<Error> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown suite `{name}` (available: {available})")]
    UnknownSuite { name: String, available: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True when the failure means "the function is not in the space"
    /// rather than a numerical or usage problem.
    pub fn is_membership_failure(&self) -> bool {
        match self {
            Error::NotInSpace { .. } | Error::Divergent(_) => true,
            Error::Side { source, .. } => source.is_membership_failure(),
            _ => false,
        }
    }

    pub fn is_accuracy_failure(&self) -> bool {
        match self {
            Error::Accuracy { .. } | Error::CurveAccuracy { .. } => true,
            Error::Side { source, .. } => source.is_accuracy_failure(),
            _ => false,
        }
    }

    pub(crate) fn on_side(self, side: Side) -> Self {
        Error::Side {
            side,
            source: Box::new(self),
        }
    }
}
