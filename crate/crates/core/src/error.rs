use std::io;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range (graph has {node_count} nodes)")]
    InvalidNode { node: NodeId, node_count: usize },

    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),

    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(NodeId, NodeId),

    #[error("edge ({0}, {1}) not present")]
    MissingEdge(NodeId, NodeId),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{0}")]
    EmptyInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
