//! Light spanners and spanning trees of weighted graphs with prioritized,
//! scaling, and average distortion guarantees, plus the measurement layer
//! that checks every guarantee on concrete instances.

pub mod benchgen;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod metric;
pub mod metrics;
pub mod paths;
pub mod prioritized;
pub mod reduction;
pub mod scaling;
pub mod slt;
pub mod tol;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{mst, EdgeId, Graph, Subgraph, VertexId, WeightedEdge};
pub use metric::{metric_closure, MetricSpace};
pub use paths::{shortest_paths, DistanceField};
