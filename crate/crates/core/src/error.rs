use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {0:?}: expected \"p/q\" or an integer")]
pub struct ParseScalarError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("anti-parallel pair ({0}, {1}) and ({1}, {0}); use the split degree convention to allow it")]
    AntiParallelPair(VertexId, VertexId),
    #[error("no directed path from {0} to {1}")]
    InfiniteDistance(VertexId, VertexId),
    #[error("vertices must be distinct, got {0} twice")]
    SameVertex(VertexId),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("alpha = {0} outside [0, 1]")]
    AlphaOutOfRange(String),
    #[error("vertex {0} has overlapping in- and out-neighbourhoods; its walk measure does not sum to one")]
    DegreeConventionViolated(VertexId),
    #[error("vertex {0} has no neighbours")]
    IsolatedVertex(VertexId),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("transport needs d({0}, {1}) but it is infinite")]
    InfiniteRequiredDistance(VertexId, VertexId),
    #[error("measures carry different total mass ({0} vs {1})")]
    MassMismatch(String, String),
    #[error("support of size {size} exceeds the oracle limit of {limit}")]
    SupportTooLarge { size: usize, limit: usize },
    #[error("potential violates f({0}) - f({1}) <= d({0}, {1})")]
    LipschitzViolation(VertexId, VertexId),
    #[error("potential is undefined at support vertex {0}")]
    PotentialUndefined(VertexId),
    #[error("masses do not fit the oracle's fixed-width lattice")]
    OracleOverflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("alpha ladder did not stabilise by k = {k_max}")]
    LadderNotStabilized { k_max: u32 },
    #[error("alpha ladder decreased at k = {k}")]
    LadderNotMonotone { k: u32 },
    #[error("alpha ladder settled on {ladder} but the exact limit is {exact}")]
    LadderMismatch { ladder: String, exact: String },
}

impl CurvatureError {
    /// True when the inputs are valid but the requested quantity is not
    /// defined for them (unreachable pairs, non-strongly-connected graphs).
    pub fn is_undefined_computation(&self) -> bool {
        matches!(
            self,
            CurvatureError::NotStronglyConnected
                | CurvatureError::Graph(GraphError::InfiniteDistance(..))
                | CurvatureError::Transport(TransportError::InfiniteRequiredDistance(..))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("size parameter {got} below the minimum {min}")]
    NTooSmall { min: usize, got: usize },
    #[error("parent map has a cycle through vertex {0}")]
    CyclicParentMap(VertexId),
    #[error("vertex {0} is neither the root nor has a parent")]
    MissingParent(VertexId),
    #[error("offsets {0} and {1} generate anti-parallel edges")]
    AntiParallelOffsets(usize, usize),
    #[error("offset set is empty")]
    EmptyOffsets,
    #[error("offset {offset} outside 1..{n}")]
    OffsetOutOfRange { offset: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
