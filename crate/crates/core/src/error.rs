use thiserror::Error;

use crate::foundations::BitString;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} is beyond the horizon {horizon}")]
    HorizonExceeded { index: u64, horizon: u64 },

    #[error("invalid name: partial sum exceeds 1 at term {term}")]
    InvalidName { term: u64 },

    #[error("sequence is not increasing at index {index}")]
    MonotonicityViolation { index: u64 },

    #[error("enumerator emitted {element} twice; not a set")]
    NotASet { element: u64 },

    #[error("prefix violation: {0} is a prefix of {1}")]
    PrefixViolation(BitString, BitString),

    #[error("weight exceeded: request for length {length} would push committed weight above 1")]
    WeightExceeded { length: u64 },

    #[error("level {level} has no strings")]
    LevelEmpty { level: u64 },

    #[error("prefix-free set has total weight {weight}, expected exactly 1")]
    WeightNotOne { weight: String },

    #[error("blocks {first} and {second} share element {element}")]
    DisjointnessViolation {
        first: usize,
        second: usize,
        element: u64,
    },

    #[error("set has only {found} elements below its view bound, {needed} needed")]
    InsufficientElements { found: u64, needed: u64 },

    #[error("budget guard: program length bound {requested} exceeds {limit}")]
    BudgetGuard { requested: u64, limit: u64 },

    #[error("precondition refuted: {0}")]
    PreconditionRefuted(String),

    #[error("rate {0}")]
    InvalidRate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
