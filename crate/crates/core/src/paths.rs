//! Multi-source Dijkstra over graphs and subgraphs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Subgraph, VertexId};

/// Anything Dijkstra can walk: a vertex count and weighted incident edges.
pub trait Adjacency: Sync {
    fn vertex_count(&self) -> usize;
    fn for_each_neighbor<F: FnMut(VertexId, f64, EdgeId)>(&self, v: VertexId, f: F);
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn for_each_neighbor<F: FnMut(VertexId, f64, EdgeId)>(&self, v: VertexId, mut f: F) {
        for &(x, id) in self.adjacency(v) {
            f(x, self.edge(id).weight, id);
        }
    }
}

impl Adjacency for Subgraph<'_> {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn for_each_neighbor<F: FnMut(VertexId, f64, EdgeId)>(&self, v: VertexId, mut f: F) {
        let g = self.graph();
        for (x, id) in self.neighbors(v) {
            f(x, g.edge(id).weight, id);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: VertexId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path distances from a source set with a predecessor forest.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub sources: Vec<VertexId>,
    pub dist: Vec<f64>,
    /// Predecessor vertex and edge on a shortest path; `None` at sources and
    /// at unreached vertices.
    pub parent: Vec<Option<(VertexId, EdgeId)>>,
}

impl DistanceField {
    /// The source at the root of `v`'s predecessor tree.
    pub fn root_of(&self, mut v: VertexId) -> VertexId {
        while let Some((p, _)) = self.parent[v] {
            v = p;
        }
        v
    }

    /// Edges of the recorded shortest path from the nearest source to `v`,
    /// listed from the source end.
    pub fn path_edges(&self, mut v: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while let Some((p, id)) = self.parent[v] {
            out.push(id);
            v = p;
        }
        out.reverse();
        out
    }
}

/// Multi-source shortest paths.
pub fn shortest_paths<A: Adjacency>(g: &A, sources: &[VertexId]) -> Result<DistanceField> {
    if sources.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    let n = g.vertex_count();
    if let Some(&bad) = sources.iter().find(|&&s| s >= n) {
        return Err(Error::InvalidVertex { vertex: bad, n });
    }
    Ok(dijkstra(g, sources, f64::INFINITY))
}

/// Dijkstra that stops settling vertices once their distance exceeds `limit`.
/// Distances beyond the limit are reported as infinite.
pub(crate) fn dijkstra<A: Adjacency>(g: &A, sources: &[VertexId], limit: f64) -> DistanceField {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = 0.0;
        heap.push(Entry { dist: 0.0, vertex: s });
    }
    while let Some(Entry { dist: d, vertex: x }) = heap.pop() {
        if done[x] || d > dist[x] {
            continue;
        }
        done[x] = true;
        g.for_each_neighbor(x, |y, w, id| {
            let nd = d + w;
            if nd <= limit && nd < dist[y] {
                dist[y] = nd;
                parent[y] = Some((x, id));
                heap.push(Entry { dist: nd, vertex: y });
            }
        });
    }
    let mut sorted = sources.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    DistanceField {
        sources: sorted,
        dist,
        parent,
    }
}

/// Single-pair distance with early exit, bounded by `limit`.
pub(crate) fn pair_distance<A: Adjacency>(g: &A, s: VertexId, t: VertexId, limit: f64) -> f64 {
    if s == t {
        return 0.0;
    }
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Entry { dist: 0.0, vertex: s });
    while let Some(Entry { dist: d, vertex: x }) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        if x == t {
            return d;
        }
        g.for_each_neighbor(x, |y, w, _| {
            let nd = d + w;
            if nd <= limit && nd < dist[y] {
                dist[y] = nd;
                heap.push(Entry { dist: nd, vertex: y });
            }
        });
    }
    f64::INFINITY
}

/// Row-major all-pairs distance matrix, one Dijkstra per source in parallel.
pub fn all_pairs<A: Adjacency>(g: &A) -> Vec<f64> {
    let n = g.vertex_count();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| dijkstra(g, &[s], f64::INFINITY).dist)
        .collect();
    rows.concat()
}
