use thiserror::Error;

use crate::theta::PartialCubeCertificate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("loop edge ({u}, {u}) is not allowed")]
    Loop { u: usize },

    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertices {u} and {v} lie in different components")]
    Disconnected { u: usize, v: usize },

    #[error("graph is not connected")]
    NotConnected,

    #[error("vertex set does not induce a connected subgraph")]
    DisconnectedSubgraph,

    #[error("graph is not a partial cube")]
    NotPartialCube(Box<PartialCubeCertificate>),

    #[error("operation is undefined on the one-vertex graph K1")]
    TrivialGraph,

    #[error("class {0} compared with itself; crossing is irreflexive")]
    SameClass(usize),

    #[error("class id {class} out of range (graph has {count} classes)")]
    ClassOutOfRange { class: usize, count: usize },

    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),

    #[error("vertex set is not convex")]
    NotConvex,

    #[error("vertex set is empty")]
    EmptySet,

    #[error(
        "{what} exceeds the configured limit of {limit}; use a smaller input or raise the limit"
    )]
    GuardExceeded { what: &'static str, limit: usize },

    #[error("no peripheral class found in a graph with {vertices} vertices; input is not a median graph")]
    NoPeripheralClass { vertices: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
