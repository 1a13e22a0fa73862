//! The classical greedy (2t-1)-spanner and the terminal backbone built from it.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Subgraph, VertexId};
use crate::metric::{metric_closure, MetricSpace};
use crate::paths::{pair_distance, Adjacency};

/// Stretch parameter `t >= 1`; the target distortion is `2t - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpannerParams {
    t: u32,
}

impl SpannerParams {
    pub fn new(t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidStretch);
        }
        Ok(SpannerParams { t })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn stretch(&self) -> f64 {
        (2 * self.t - 1) as f64
    }
}

/// Growing adjacency lists for the spanner under construction.
struct Partial {
    adj: Vec<Vec<(VertexId, f64)>>,
}

impl Adjacency for Partial {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn for_each_neighbor<F: FnMut(VertexId, f64, EdgeId)>(&self, v: VertexId, mut f: F) {
        for &(x, w) in &self.adj[v] {
            f(x, w, 0);
        }
    }
}

/// Scan candidates in order and keep `(u, v, w)` iff the current spanner
/// distance exceeds `stretch * w`. Returns the positions of kept candidates.
fn greedy_scan<I>(n: usize, candidates: I, stretch: f64) -> Vec<usize>
where
    I: IntoIterator<Item = (VertexId, VertexId, f64)>,
{
    let mut h = Partial {
        adj: vec![Vec::new(); n],
    };
    let mut kept = Vec::new();
    for (i, (u, v, w)) in candidates.into_iter().enumerate() {
        let limit = stretch * w;
        if pair_distance(&h, u, v, limit) > limit {
            h.adj[u].push((v, w));
            h.adj[v].push((u, w));
            kept.push(i);
        }
    }
    kept
}

/// Greedy spanner of a graph: every pair ends with distortion at most `2t - 1`,
/// and the MST is contained in the result.
pub fn greedy_spanner(g: &Graph, params: SpannerParams) -> Subgraph<'_> {
    let order = g.sorted_edge_ids();
    let kept = greedy_scan(
        g.n(),
        order.iter().map(|&id| {
            let e = g.edge(id);
            (e.u, e.v, e.weight)
        }),
        params.stretch(),
    );
    let mut s = g.empty_subgraph();
    s.extend(kept.into_iter().map(|i| order[i]));
    s
}

/// Greedy spanner of the complete graph of a metric. Pairs `(i, j)` with
/// `i < j` are scanned by distance, ties broken lexicographically.
pub fn greedy_metric_spanner(m: &MetricSpace, params: SpannerParams) -> Vec<(usize, usize)> {
    let n = m.n();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    pairs.sort_by(|a, b| m.dist(a.0, a.1).total_cmp(&m.dist(b.0, b.1)).then(a.cmp(b)));
    let kept = greedy_scan(
        n,
        pairs.iter().map(|&(i, j)| (i, j, m.dist(i, j))),
        params.stretch(),
    );
    kept.into_iter().map(|i| pairs[i]).collect()
}

/// `t = ceil(log2 max(k, 2)) + 1` for a terminal set of size `k`.
pub fn backbone_param(k: usize) -> SpannerParams {
    let k = k.max(2);
    let ceil_log = usize::BITS - (k - 1).leading_zeros();
    SpannerParams { t: ceil_log + 1 }
}

/// Terminal backbone: a greedy spanner of the metric closure on `K`, with
/// each selected closure edge replaced by its host shortest path.
#[derive(Debug, Clone)]
pub struct Backbone<'g> {
    pub spanner: Subgraph<'g>,
    pub params: SpannerParams,
    /// Selected closure edges as host vertex pairs.
    pub closure_edges: Vec<(VertexId, VertexId)>,
    /// Sum of the host path weights over selected closure edges.
    pub path_weight: f64,
}

pub fn terminal_backbone<'g>(g: &'g Graph, terminals: &[VertexId]) -> Result<Backbone<'g>> {
    let params = backbone_param(terminals.len());
    let closure = metric_closure(g, terminals)?;
    let selected = greedy_metric_spanner(closure.metric(), params);
    let mut spanner = g.empty_subgraph();
    let mut path_weight = 0.0;
    let mut closure_edges = Vec::with_capacity(selected.len());
    for (a, b) in selected {
        spanner.extend(closure.path(a, b));
        path_weight += closure.metric().dist(a, b);
        closure_edges.push((terminals[a], terminals[b]));
    }
    Ok(Backbone {
        spanner,
        params,
        closure_edges,
        path_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::mst;
    use crate::paths::all_pairs;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Graph::new(n, &e).unwrap()
    }

    #[test]
    fn params() {
        assert!(SpannerParams::new(0).is_err());
        assert_eq!(SpannerParams::new(3).unwrap().stretch(), 5.0);
        assert_eq!(backbone_param(1).t(), 2);
        assert_eq!(backbone_param(2).t(), 2);
        assert_eq!(backbone_param(3).t(), 3);
        assert_eq!(backbone_param(8).t(), 4);
        assert_eq!(backbone_param(9).t(), 5);
    }

    #[test]
    fn c5_keeps_spanning_path() {
        let g = cycle(5);
        let h = greedy_spanner(&g, SpannerParams::new(3).unwrap());
        assert_eq!(h.edge_ids().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let d = all_pairs(&h);
        assert_eq!(d[4], 4.0);
    }

    #[test]
    fn stretch_one_keeps_shortest_edges() {
        // the 0-2 edge is as long as the path through 1
        let g = Graph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]).unwrap();
        let h = greedy_spanner(&g, SpannerParams::new(1).unwrap());
        assert_eq!(h.len(), 2);
        let g = Graph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.5)]).unwrap();
        assert_eq!(greedy_spanner(&g, SpannerParams::new(1).unwrap()).len(), 3);
    }

    #[test]
    fn uniform_metric_star() {
        let mut d = vec![1.0; 16];
        for i in 0..4 {
            d[i * 4 + i] = 0.0;
        }
        let m = MetricSpace::from_matrix(4, d).unwrap();
        let e = greedy_metric_spanner(&m, SpannerParams::new(2).unwrap());
        assert_eq!(e, vec![(0, 1), (0, 2), (0, 3)]);
        let e = greedy_metric_spanner(&m, SpannerParams::new(1).unwrap());
        assert_eq!(e.len(), 6);
    }

    #[test]
    fn contains_mst() {
        let g = cycle(7);
        let h = greedy_spanner(&g, SpannerParams::new(2).unwrap());
        assert!(mst(&g).is_subset_of(&h));
    }

    #[test]
    fn backbone_small_cases() {
        let g = cycle(6);
        let b = terminal_backbone(&g, &[3]).unwrap();
        assert!(b.spanner.is_empty());
        let b = terminal_backbone(&g, &[0, 2]).unwrap();
        assert_eq!(b.spanner.len(), 2);
        assert_eq!(b.spanner.weight(), 2.0);
        assert_eq!(b.path_weight, 2.0);
    }
}
