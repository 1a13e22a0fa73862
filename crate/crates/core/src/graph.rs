//! Weighted undirected graphs, edge subsets, and the minimum spanning tree.
//!
//! Every [`Graph`] carries a strict total order on its edges: by weight,
//! then by edge id. All constructions in this crate scan edges in that order,
//! which makes the MST unique and every output reproducible.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: f64,
    pub id: EdgeId,
}

impl WeightedEdge {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Compare two edges under the global (weight, id) order.
pub fn edge_order(a: &WeightedEdge, b: &WeightedEdge) -> Ordering {
    a.weight.total_cmp(&b.weight).then(a.id.cmp(&b.id))
}

/// Immutable, connected, weighted undirected graph without parallel edges.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<WeightedEdge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    order: Vec<EdgeId>,
}

impl Graph {
    /// Build a graph from an edge list. Parallel edges collapse onto the
    /// first occurrence of the vertex pair, keeping the lighter weight;
    /// edge ids are positions in the collapsed list.
    pub fn new(n: usize, edges: &[(VertexId, VertexId, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("graph needs at least one vertex".into()));
        }
        let mut slot: HashMap<(usize, usize), usize> = HashMap::with_capacity(edges.len());
        let mut list: Vec<WeightedEdge> = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::NegativeWeight { u, v, weight: w });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            match slot.get(&key) {
                Some(&i) => {
                    if w < list[i].weight {
                        list[i].weight = w;
                    }
                }
                None => {
                    slot.insert(key, list.len());
                    list.push(WeightedEdge {
                        u: key.0,
                        v: key.1,
                        weight: w,
                        id: list.len(),
                    });
                }
            }
        }
        let g = Self::assemble(n, list);
        if let Some(unreached) = g.first_unreachable() {
            return Err(Error::DisconnectedGraph { unreached });
        }
        Ok(g)
    }

    fn assemble(n: usize, edges: Vec<WeightedEdge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u].push((e.v, e.id));
            adjacency[e.v].push((e.u, e.id));
        }
        let mut order: Vec<EdgeId> = (0..edges.len()).collect();
        order.sort_by(|&a, &b| edge_order(&edges[a], &edges[b]));
        Graph {
            n,
            edges,
            adjacency,
            order,
        }
    }

    fn first_unreachable(&self) -> Option<VertexId> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    /// Same topology and edge ids, new weights.
    pub(crate) fn with_weights(&self, weights: &[f64]) -> Graph {
        debug_assert_eq!(weights.len(), self.edges.len());
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| WeightedEdge { weight: w, ..*e })
            .collect();
        Self::assemble(self.n, edges)
    }

    /// The graph induced by an ascending list of edge ids. Edge `i` of the
    /// result is `ids[i]` of `self`, so the relative tie-break order is kept.
    pub(crate) fn restrict(&self, ids: &[EdgeId]) -> Graph {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        let edges = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| WeightedEdge {
                id: i,
                ..self.edges[id]
            })
            .collect();
        Self::assemble(self.n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &WeightedEdge {
        &self.edges[id]
    }

    pub fn adjacency(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    /// Edge ids sorted by the global (weight, id) order.
    pub fn sorted_edge_ids(&self) -> &[EdgeId] {
        &self.order
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a]
            .iter()
            .find(|&&(x, _)| x == b)
            .map(|&(_, id)| id)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn full(&self) -> Subgraph<'_> {
        Subgraph {
            graph: self,
            mask: vec![true; self.edges.len()],
            len: self.edges.len(),
        }
    }

    pub fn empty_subgraph(&self) -> Subgraph<'_> {
        Subgraph {
            graph: self,
            mask: vec![false; self.edges.len()],
            len: 0,
        }
    }

    /// Build a subgraph from edge ids; duplicates are ignored.
    pub fn subgraph<I: IntoIterator<Item = EdgeId>>(&self, ids: I) -> Result<Subgraph<'_>> {
        let mut s = self.empty_subgraph();
        for id in ids {
            if id >= self.edges.len() {
                return Err(Error::InvalidParams(format!(
                    "edge id {id} out of range ({} edges)",
                    self.edges.len()
                )));
            }
            s.insert(id);
        }
        Ok(s)
    }
}

/// An edge subset of a parent graph, measured with the parent's weights.
#[derive(Debug, Clone)]
pub struct Subgraph<'g> {
    graph: &'g Graph,
    mask: Vec<bool>,
    len: usize,
}

impl PartialEq for Subgraph<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph) && self.mask == other.mask
    }
}

impl<'g> Subgraph<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.mask[id]
    }

    pub fn insert(&mut self, id: EdgeId) -> bool {
        if self.mask[id] {
            return false;
        }
        self.mask[id] = true;
        self.len += 1;
        true
    }

    pub fn extend<I: IntoIterator<Item = EdgeId>>(&mut self, ids: I) {
        for id in ids {
            self.insert(id);
        }
    }

    /// Edge ids in ascending order.
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn edges(&self) -> impl Iterator<Item = &'g WeightedEdge> + '_ {
        let g = self.graph;
        self.edge_ids().map(move |id| &g.edges[id])
    }

    pub fn weight(&self) -> f64 {
        self.edges().map(|e| e.weight).sum()
    }

    pub fn union(&self, other: &Subgraph<'_>) -> Subgraph<'g> {
        debug_assert_eq!(self.mask.len(), other.mask.len());
        let mut out = self.clone();
        out.extend(other.edge_ids());
        out
    }

    pub fn is_subset_of(&self, other: &Subgraph<'_>) -> bool {
        self.mask
            .iter()
            .zip(&other.mask)
            .all(|(&a, &b)| !a || b)
    }

    /// Neighbors of `v` through edges of this subgraph.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.graph.adjacency[v]
            .iter()
            .copied()
            .filter(|&(_, id)| self.mask[id])
    }

    pub fn is_connected(&self) -> bool {
        let n = self.graph.n;
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for (y, _) in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    pub fn is_spanning_tree(&self) -> bool {
        self.len + 1 == self.graph.n && self.is_connected()
    }

    /// Materialize this subgraph as a standalone graph together with the map
    /// from its edge ids back to parent edge ids.
    pub fn to_graph(&self) -> (Graph, Vec<EdgeId>) {
        let ids: Vec<EdgeId> = self.edge_ids().collect();
        (self.graph.restrict(&ids), ids)
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Kruskal over edges already listed in the global order.
fn kruskal<'a, I>(n: usize, sorted: I) -> Vec<EdgeId>
where
    I: IntoIterator<Item = &'a WeightedEdge>,
{
    let mut sets = DisjointSets::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for e in sorted {
        if sets.union(e.u, e.v) {
            tree.push(e.id);
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    tree
}

/// The unique minimum spanning tree under the (weight, id) order.
pub fn mst(g: &Graph) -> Subgraph<'_> {
    let ids = kruskal(g.n, g.order.iter().map(|&id| &g.edges[id]));
    let mut s = g.empty_subgraph();
    s.extend(ids);
    s
}

/// Minimum spanning forest of a subgraph under the parent's global order.
pub fn mst_of<'g>(h: &Subgraph<'g>) -> Subgraph<'g> {
    let g = h.graph;
    let ids = kruskal(
        g.n,
        g.order
            .iter()
            .filter(|&&id| h.mask[id])
            .map(|&id| &g.edges[id]),
    );
    let mut s = g.empty_subgraph();
    s.extend(ids);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn minimal_graph() {
        let g = Graph::new(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parallel_edges_collapse_to_lighter() {
        let g = Graph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (0, 2, 5.0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        let id = g.find_edge(2, 0).unwrap();
        assert_eq!(g.edge(id).weight, 1.0);
        let g = Graph::new(2, &[(1, 0, 4.0), (0, 1, 2.0)]).unwrap();
        assert_eq!(g.edge(0).weight, 2.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Graph::new(3, &[(0, 1, 1.0)]),
            Err(Error::DisconnectedGraph { unreached: 2 })
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 2, 1.0)]),
            Err(Error::InvalidVertex { vertex: 2, n: 2 })
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1, -1.0)]),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1, f64::NAN)]),
            Err(Error::NegativeWeight { .. })
        ));
    }

    #[test]
    fn triangle_mst() {
        let g = Graph::new(3, &[(0, 1, 3.0), (1, 2, 1.0), (0, 2, 2.0)]).unwrap();
        let t = mst(&g);
        assert_eq!(t.edge_ids().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(t.weight(), 3.0);
    }

    #[test]
    fn cycle_tie_break_drops_highest_id() {
        let g = cycle(4);
        let t = mst(&g);
        assert_eq!(t.edge_ids().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(mst(&g), t);
    }

    #[test]
    fn restrict_preserves_order() {
        let g = cycle(5);
        let (h, ids) = g.subgraph([4, 1, 3]).unwrap().to_graph();
        assert_eq!(ids, vec![1, 3, 4]);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.edge(2).u, g.edge(4).u);
    }

    #[test]
    fn subgraph_set_semantics() {
        let g = cycle(4);
        let mut s = g.subgraph([0, 0, 2]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(!s.insert(2));
        assert!(s.is_subset_of(&g.full()));
        assert!(!g.full().is_subset_of(&s));
        assert!(!s.is_connected());
        assert!(g.subgraph([9]).is_err());
    }
}
