use thiserror::Error;

use crate::minor::{PartialPartition, PartitionViolation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no path between {0} and {1}")]
    NoPath(usize, usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(PartitionViolation),

    /// Ball growing failed to assign every vertex within its outer-iteration
    /// budget. Carries the partition reached so far.
    #[error(
        "iteration cap of {cap} outer iterations exceeded with {unassigned} vertices unassigned"
    )]
    IterationCap {
        cap: u64,
        unassigned: usize,
        partial: Box<PartialPartition>,
    },

    #[error("no separating gap of {window} empty exponents in the rounded terminal distances")]
    NoGap { window: usize },

    #[error("recursion depth {depth} exceeds the terminal count {k}")]
    RecursionDepth { depth: usize, k: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("all {0} trials failed")]
    AllTrialsFailed(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
