use thiserror::Error;

use crate::chain::Scenario;
use crate::survival::Group;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group {0} has no observations")]
    EmptyGroup(Group),

    #[error("record {index}: time {time} is negative")]
    NegativeTime { index: usize, time: f64 },

    #[error("record {index}: time is not finite")]
    NonFiniteTime { index: usize },

    #[error("dataset contains no failure events")]
    NoFailures,

    #[error("dataset contains tied observation times")]
    TiesPresent,

    #[error("rho must be a finite nonnegative number, got {0}")]
    InvalidRho(f64),

    /// V = 0: at every failure time one of the two risk sets is empty.
    /// `step` is the chain step whose arrangement is degenerate (0 = initial).
    #[error("variance is zero{}", .step.map(|s| format!(" at chain step {s}")).unwrap_or_default())]
    DegenerateVariance { step: Option<usize> },

    #[error("position {position} does not hold an adjacent (G0, G1) pair")]
    NotAdjacentPair { position: usize },

    #[error("monotonicity violated at step {step} ({scenario}): {detail}")]
    MonotonicityViolation {
        step: usize,
        scenario: Scenario,
        detail: String,
    },

    #[error("group {group} interval {index} is invalid (needs finite lower <= upper)")]
    InvalidInterval { group: Group, index: usize },

    #[error("group {group}: intervals {first} and {second} are out of order")]
    InconsistentWithinGroupOrder { group: Group, first: usize, second: usize },

    #[error("G0 interval {g0_index} and G1 interval {g1_index} are the same point; no strict order exists")]
    ForcedTie { g0_index: usize, g1_index: usize },

    #[error("{total} observations exceed the enumeration cap of {cap}")]
    CapExceeded { total: usize, cap: usize },

    #[error("every interleaving has zero variance")]
    AllDegenerate,

    #[error("no feasible interleaving")]
    NoFeasible,

    #[error("input: {0}")]
    Input(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyGroup(_) => "EmptyGroup",
            Error::NegativeTime { .. } => "NegativeTime",
            Error::NonFiniteTime { .. } => "NonFiniteTime",
            Error::NoFailures => "NoFailures",
            Error::TiesPresent => "TiesPresent",
            Error::InvalidRho(_) => "InvalidRho",
            Error::DegenerateVariance { .. } => "DegenerateVariance",
            Error::NotAdjacentPair { .. } => "NotAdjacentPair",
            Error::MonotonicityViolation { .. } => "MonotonicityViolation",
            Error::InvalidInterval { .. } => "InvalidInterval",
            Error::InconsistentWithinGroupOrder { .. } => "InconsistentWithinGroupOrder",
            Error::ForcedTie { .. } => "ForcedTie",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::AllDegenerate => "AllDegenerate",
            Error::NoFeasible => "NoFeasible",
            Error::Input(_) => "InvalidInput",
        }
    }

    /// True for errors that indicate a broken internal guarantee rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::MonotonicityViolation { .. })
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Input(err.to_string())
    }
}
