use thiserror::Error;

use crate::net::{EdgeId, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("source and target must differ (both are {0})")]
    SourceEqualsTarget(NodeId),
    #[error("node {0} is not part of the net")]
    UnknownNode(NodeId),
    #[error("edge {0} is not part of the net")]
    UnknownEdge(EdgeId),
}

/// Errors raised by the exhaustive reference procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("simple path enumeration exceeded the cap of {cap} paths")]
    PathExplosion { cap: usize },
    #[error("net has {nodes} nodes, exhaustive search is limited to {bound}")]
    TooManyNodes { nodes: usize, bound: usize },
    #[error("gadget edge {edge} is not allowed: {reason}")]
    ForbiddenGadgetEdge { edge: EdgeId, reason: &'static str },
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TtspError {
    #[error("net contains a directed cycle through node {0}")]
    Cyclic(NodeId),
    #[error("node {0} is not on any st-path")]
    NotStConnected(NodeId),
}

/// A broken internal invariant. Seeing one of these means a bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("internal invariant violated: {0}")]
pub struct InvariantError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Ttsp(#[from] TtspError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WardropError {
    #[error("demand must lie in (0, 1], got {0}")]
    DemandOutOfRange(String),
    #[error("embedding is not valid for this net")]
    InvalidEmbedding,
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}
