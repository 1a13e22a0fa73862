use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph is disconnected: vertex {unreached} is not reachable from vertex 0")]
    DisconnectedGraph { unreached: VertexId },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("edge ({u}, {v}) has invalid weight {weight}")]
    NegativeWeight { u: usize, v: usize, weight: f64 },
    #[error("self loop on vertex {0}")]
    SelfLoop(usize),
    #[error("shortest-path query with an empty source set")]
    EmptySourceSet,
    #[error("farness is undefined for identical points ({0})")]
    IdenticalPoints(usize),
    #[error("alpha must be greater than 1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("delta must lie in (0, 1], got {0}")]
    DeltaOutOfRange(f64),
    #[error("rho must lie in (0, 1), got {0}")]
    RhoOutOfRange(f64),
    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsOutOfRange(f64),
    #[error("stretch parameter t must be at least 1")]
    InvalidStretch,
    #[error("the supplied tree is not the minimum spanning tree of the graph")]
    NotTheMst,
    #[error("embedding contracts pair ({u}, {v}): source {source_dist}, target {target_dist}")]
    ContractiveEmbedding {
        u: usize,
        v: usize,
        source_dist: f64,
        target_dist: f64,
    },
    #[error("priority ranking does not match the canonical ranking of the source metric")]
    RankingMismatch,
    #[error("invalid priority ranking: {0}")]
    InvalidRanking(String),
    #[error("metric is degenerate: {0}")]
    DegenerateMetric(String),
    #[error("edge set is not a spanning tree: {0}")]
    NotATree(String),
    #[error("subgraph does not connect vertices {u} and {v}")]
    Disconnected { u: VertexId, v: VertexId },
    #[error("subgraph and graph have different vertex sets ({graph} vs {subgraph})")]
    NotSpanning { graph: usize, subgraph: usize },
    #[error("lower-bound verification not applicable: lightness {lightness} exceeds 1 + {rho}")]
    NotApplicable { lightness: f64, rho: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} violated at pair ({u}, {v}): {value} > {bound}")]
    Certification {
        what: String,
        u: usize,
        v: usize,
        value: f64,
        bound: f64,
    },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
