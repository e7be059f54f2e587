use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {0} out of range (n = {1})")]
    NodeOutOfRange(NodeId, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) has weight {2}, allowed range is 1..={3}")]
    BadWeight(NodeId, NodeId, u64, u64),
    #[error("maximum weight {0} exceeds the bound 2^{1} for this graph size")]
    WeightBoundTooLarge(u64, u32),
    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(NodeId, NodeId),
    #[error("new weight {2} for edge ({0}, {1}) is not an increase over {3}")]
    NotAnIncrease(NodeId, NodeId, u64, u64),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("trace line {line}: {msg}")]
    Trace { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("sampling produced an oversized set: {0}")]
    OversizedSample(String),
    #[error("verification mismatch at update {idx}: {msg}")]
    Mismatch { idx: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
