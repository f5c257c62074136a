use alloc::string::String;

use crate::curves::Violation;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("rank mismatch: expected sl_{expected}, found sl_{found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("weight {weight} exceeds level {level}")]
    LevelViolation { weight: String, level: u32 },
    #[error("{0}")]
    InvalidGraph(Violation),
    #[error("unknown leg {0}")]
    UnknownLeg(u32),
    #[error("leg {0} carries a nonzero weight")]
    NonzeroWeightLeg(u32),
    #[error("leg {0} has no weight label")]
    UnlabeledLeg(u32),
    #[error("legs {0} and {1} carry labels that are not dual to each other")]
    LabelMismatch(u32, u32),
    #[error("curve becomes unstable: {0}")]
    Instability(String),
    #[error("malformed subsets: {0}")]
    MalformedSubsets(String),
    #[error("datum is not destabilizing: {0}")]
    NotDestabilizing(String),
    #[error("weight lies on a wall")]
    NonGeneral,
    #[error("out of scope: {0}")]
    OutOfScope(&'static str),
    #[error("cannot perturb: {0}")]
    CannotPerturb(String),
    #[error("divisor is not big: {0}")]
    NotBig(String),
    #[error("divisor is not on the boundary of the cone")]
    NotOnBoundary,
    #[error("mismatched curve types: {0}")]
    MismatchedType(String),
    #[error("invalid fusion table entry: {0}")]
    InvalidTableEntry(String),
    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = core::result::Result<T, Error>;
