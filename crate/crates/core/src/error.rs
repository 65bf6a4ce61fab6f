//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("adjacency matrix is not square: row {row} has {got} entries, expected {expected}")]
    NonSquareMatrix {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("loop at vertex {0}: diagonal entries must be absent")]
    LoopEdge(usize),

    #[error("vertex {vertex} out of range for digraph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("input is not a tournament")]
    NotTournament,

    #[error("input is not an oriented graph")]
    NotOriented,

    #[error("digraph is not strongly connected; witness component: {witness:?}")]
    NotStronglyConnected { witness: Vec<usize> },

    #[error("input too small: need at least {need} vertices, got {got}")]
    InputTooSmall { need: usize, got: usize },

    #[error("guard exceeded: {what} = {got} is over the limit {limit}")]
    GuardExceeded {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("invalid permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("comparator network on {registers} registers does not sort the given permutation")]
    NetworkDoesNotSort { registers: usize },

    #[error("need {need} registers, got {got}")]
    TooFewRegisters { need: usize, got: usize },

    #[error("endpoint sets too small: |A| = {a}, |B| = {b}, need at least {k}")]
    EndpointSetsTooSmall { a: usize, b: usize, k: usize },

    #[error(
        "separator of size {} blocks the requested {want} disjoint paths: {cut:?}",
        cut.len()
    )]
    SeparatedByCut { want: usize, cut: Vec<usize> },

    #[error("out-degree {got} of vertex {vertex} is below the required {need}")]
    OutDegreeTooLow {
        vertex: usize,
        got: usize,
        need: usize,
    },

    #[error("in-degree {got} of vertex {vertex} is below the required {need}")]
    InDegreeTooLow {
        vertex: usize,
        got: usize,
        need: usize,
    },

    #[error(
        "switch embedding failed at comparator {comparator}: vertex {vertex} has out-degree {got} < 7 in the remaining tournament"
    )]
    SwitchDegree {
        comparator: usize,
        vertex: usize,
        got: usize,
    },

    #[error("linkage endpoints must be distinct: {0:?}")]
    EndpointsNotDistinct(Vec<usize>),

    #[error("strict linkage threshold not met: need strong {need}-connectivity, order is only {order}")]
    StrictLinkageThreshold { need: usize, order: usize },

    #[error("no spare neighbour available to clone endpoint {vertex}")]
    NoSpareNeighbour { vertex: usize },

    #[error("short linkage needs |D| >= 4ks = {need}, got {got}")]
    ShortLinkageOrder { need: usize, got: usize },

    #[error("covering edge precondition failed: {message}")]
    CoveringEdge { message: String },

    #[error("dominating-set precondition failed for vertex {vertex}: {message}")]
    Domination { vertex: usize, message: String },

    #[error("path cover extension failed: {message}")]
    Extension { message: String },

    #[error("engine stage `{stage}` failed: {message}")]
    EngineStage { stage: String, message: String },

    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
