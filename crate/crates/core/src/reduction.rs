//! Black-box lightness reduction.
//!
//! Given any spanner builder with lightness `l` and distortion `t(u, v)`,
//! scale every non-MST edge by `1 / delta`, run the builder on the reweighted
//! graph, and add the MST back under the original weights. The result has
//! lightness at most `1 + delta * l`, distortion at most `t(u, v) / delta`,
//! and contains the MST.

use crate::error::{Error, Result};
use crate::graph::{mst, EdgeId, Graph, Subgraph, VertexId};
use crate::greedy::{greedy_spanner, SpannerParams};

/// A spanner construction usable inside the reduction.
pub trait SpannerBuilder: Sync {
    fn build<'a>(&self, g: &'a Graph) -> Result<Subgraph<'a>>;

    /// Declared distortion bound for the pair, or `None` if the builder
    /// promises nothing for it.
    fn stretch_bound(&self, u: VertexId, v: VertexId) -> Option<f64>;
}

/// Returns the whole input graph (distortion 1).
#[derive(Debug, Clone, Copy, Default)]
pub struct WholeGraph;

impl SpannerBuilder for WholeGraph {
    fn build<'a>(&self, g: &'a Graph) -> Result<Subgraph<'a>> {
        Ok(g.full())
    }

    fn stretch_bound(&self, _: VertexId, _: VertexId) -> Option<f64> {
        Some(1.0)
    }
}

/// Returns the MST of the input (lightness 1, no distortion promise).
#[derive(Debug, Clone, Copy, Default)]
pub struct MstOnly;

impl SpannerBuilder for MstOnly {
    fn build<'a>(&self, g: &'a Graph) -> Result<Subgraph<'a>> {
        Ok(mst(g))
    }

    fn stretch_bound(&self, _: VertexId, _: VertexId) -> Option<f64> {
        None
    }
}

/// The greedy `(2t - 1)`-spanner.
#[derive(Debug, Clone, Copy)]
pub struct Greedy(pub SpannerParams);

impl SpannerBuilder for Greedy {
    fn build<'a>(&self, g: &'a Graph) -> Result<Subgraph<'a>> {
        Ok(greedy_spanner(g, self.0))
    }

    fn stretch_bound(&self, _: VertexId, _: VertexId) -> Option<f64> {
        Some(self.0.stretch())
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::DeltaOutOfRange(delta))
    }
}

/// Multiply every edge outside `tree` by `1 / delta`; `tree` must be the MST
/// of `g`. Edge ids are preserved and the MST of the result is `tree` again.
pub fn reweight(g: &Graph, tree: &Subgraph<'_>, delta: f64) -> Result<Graph> {
    check_delta(delta)?;
    if !std::ptr::eq(tree.graph(), g) || *tree != mst(g) {
        return Err(Error::NotTheMst);
    }
    let weights: Vec<f64> = g
        .edges()
        .iter()
        .map(|e| {
            if tree.contains(e.id) {
                e.weight
            } else {
                e.weight / delta
            }
        })
        .collect();
    Ok(g.with_weights(&weights))
}

/// Output of [`reduce`], with everything needed to audit the weight ledger.
#[derive(Debug, Clone)]
pub struct Reduction<'g> {
    pub spanner: Subgraph<'g>,
    pub mst: Subgraph<'g>,
    pub reweighted: Graph,
    /// Edge ids chosen by the builder on the reweighted graph.
    pub builder_edges: Vec<EdgeId>,
    /// Builder lightness measured on the reweighted graph.
    pub builder_lightness: f64,
    pub delta: f64,
}

impl Reduction<'_> {
    /// `1 + delta * l` for the measured builder lightness `l`.
    pub fn lightness_bound(&self) -> f64 {
        1.0 + self.delta * self.builder_lightness
    }

    /// Both sides of `w(H) - w(T) = delta * w'(E_H' \ T)`.
    pub fn weight_ledger(&self) -> (f64, f64) {
        let lhs = self.spanner.weight() - self.mst.weight();
        let extra: f64 = self
            .builder_edges
            .iter()
            .filter(|&&id| !self.mst.contains(id))
            .map(|&id| self.reweighted.edge(id).weight)
            .sum();
        (lhs, self.delta * extra)
    }
}

pub fn reduce<'g, B: SpannerBuilder + ?Sized>(
    builder: &B,
    g: &'g Graph,
    delta: f64,
) -> Result<Reduction<'g>> {
    check_delta(delta)?;
    let tree = mst(g);
    let reweighted = reweight(g, &tree, delta)?;
    let (builder_edges, builder_lightness) = {
        let h = builder.build(&reweighted)?;
        let tree_weight = tree.weight();
        let l = if tree_weight > 0.0 {
            h.weight() / tree_weight
        } else {
            1.0
        };
        (h.edge_ids().collect::<Vec<_>>(), l)
    };
    let mut spanner = tree.clone();
    spanner.extend(builder_edges.iter().copied());
    Ok(Reduction {
        spanner,
        mst: tree,
        reweighted,
        builder_edges,
        builder_lightness,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]).unwrap()
    }

    #[test]
    fn identity_reweight() {
        let g = triangle();
        let g2 = reweight(&g, &mst(&g), 1.0).unwrap();
        assert_eq!(g2.edges(), g.edges());
    }

    #[test]
    fn non_mst_edge_scaled() {
        let g = triangle();
        let g2 = reweight(&g, &mst(&g), 0.5).unwrap();
        assert_eq!(g2.edge(2).weight, 4.0);
        assert_eq!(g2.edge(0).weight, 1.0);
        assert_eq!(mst(&g2).edge_ids().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn rejects_wrong_tree_and_delta() {
        let g = triangle();
        let not_mst = g.subgraph([0, 2]).unwrap();
        assert_eq!(reweight(&g, &not_mst, 0.5).unwrap_err(), Error::NotTheMst);
        assert_eq!(
            reweight(&g, &mst(&g), 0.0).unwrap_err(),
            Error::DeltaOutOfRange(0.0)
        );
        assert!(reduce(&WholeGraph, &g, 1.5).is_err());
    }

    #[test]
    fn whole_graph_identity() {
        let g = triangle();
        let r = reduce(&WholeGraph, &g, 1.0).unwrap();
        assert_eq!(r.spanner, g.full());
        let (lhs, rhs) = r.weight_ledger();
        assert!(tol::approx_eq(lhs, rhs));
    }

    #[test]
    fn mst_fixed_point() {
        let e: Vec<_> = (0..4).map(|i| (i, (i + 1) % 4, 1.0)).collect();
        let g = Graph::new(4, &e).unwrap();
        let r = reduce(&MstOnly, &g, 0.5).unwrap();
        assert_eq!(r.spanner, mst(&g));
        assert_eq!(r.builder_lightness, 1.0);
        assert_eq!(r.weight_ledger(), (0.0, 0.0));
    }
}
