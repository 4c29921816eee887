use std::io;

use thiserror::Error;

use crate::kset::Element;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} is already assigned")]
    ElementAlreadyAssigned { element: Element },

    #[error("position {position} is outside 1..={k}")]
    PositionOutOfRange { position: usize, k: usize },

    #[error("k-sets have different k ({left} vs {right})")]
    MismatchedK { left: usize, right: usize },

    #[error("element {element} is not in the universe")]
    UnknownElement { element: Element },

    #[error("no element fits within the budget")]
    EmptyUniverse,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("bonus weights for element {element} violate pairwise monotonicity at positions {i} and {j}")]
    PairwiseViolation { element: Element, i: usize, j: usize },

    #[error("epsilon {0} is outside (0, 1/5)")]
    EpsilonOutOfRange(f64),

    #[error("enumeration of {states} states exceeds the cap of {cap}")]
    InstanceTooLarge { states: f64, cap: u64 },

    #[error("trace mismatch: {0}")]
    TraceMismatch(String),

    #[error("node {0} is not in the graph")]
    UnknownNode(usize),

    #[error("covariance matrix is not positive definite")]
    SingularCovariance,

    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("line {line}: weight {value} is outside [0, 1]")]
    WeightOutOfRange { line: usize, value: f64 },

    #[error("no usable sensor rows")]
    NoUsableRows,

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InstanceTooLarge { .. } => 3,
            Error::Io(_) | Error::Csv(_) => 4,
            _ => 2,
        }
    }
}
