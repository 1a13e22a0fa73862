//! Shallow-light trees rooted at a vertex set.
//!
//! Walk an Euler tour of the MST carrying an upper bound on the current
//! vertex's distance to `K` inside the subgraph built so far. Whenever the
//! bound exceeds `alpha * d_G(u, K)`, graft the shortest path from `K` to `u`
//! and reset the bound to `d_G(u, K)`. The grafted paths weigh at most
//! `2 w(MST) / (alpha - 1)` in total.

use crate::error::{Error, Result};
use crate::graph::{mst, Graph, Subgraph, VertexId};
use crate::paths::shortest_paths;

pub fn slt<'g>(g: &'g Graph, terminals: &[VertexId], alpha: f64) -> Result<Subgraph<'g>> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let field = shortest_paths(g, terminals)?;
    let tree = mst(g);
    let mut out = tree.clone();

    let n = g.n();
    let root = *terminals.iter().min().expect("nonempty after shortest_paths");
    let mut visited = vec![false; n];
    visited[root] = true;
    // (vertex, weight of the edge we arrived by, neighbor cursor)
    let mut stack: Vec<(VertexId, f64, usize)> = vec![(root, 0.0, 0)];
    let children: Vec<Vec<(VertexId, f64)>> = (0..n)
        .map(|v| {
            tree.neighbors(v)
                .map(|(x, id)| (x, g.edge(id).weight))
                .collect()
        })
        .collect();
    let mut bound = 0.0_f64;
    let step = |v: VertexId, w: f64, bound: &mut f64, out: &mut Subgraph<'g>| {
        *bound += w;
        if *bound > alpha * field.dist[v] {
            out.extend(field.path_edges(v));
            *bound = field.dist[v];
        }
    };

    while let Some(top) = stack.last_mut() {
        let (v, _, cursor) = *top;
        if let Some(&(x, w)) = children[v].get(cursor) {
            top.2 += 1;
            if !visited[x] {
                visited[x] = true;
                step(x, w, &mut bound, &mut out);
                stack.push((x, w, 0));
            }
        } else {
            let (_, w, _) = stack.pop().expect("nonempty");
            if let Some(&(parent, _, _)) = stack.last() {
                step(parent, w, &mut bound, &mut out);
            }
        }
    }
    Ok(out)
}

/// The lightness ceiling `1 + 2 / (alpha - 1)`.
pub fn slt_lightness_bound(alpha: f64) -> f64 {
    1.0 + 2.0 / (alpha - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    fn check<'g>(g: &'g Graph, k: &[VertexId], alpha: f64) -> Subgraph<'g> {
        let s = slt(g, k, alpha).unwrap();
        let dg = shortest_paths(g, k).unwrap().dist;
        let ds = shortest_paths(&s, k).unwrap().dist;
        for u in 0..g.n() {
            assert!(tol::le(ds[u], alpha * dg[u]), "vertex {u}: {} > {alpha}*{}", ds[u], dg[u]);
        }
        let w_mst = mst(g).weight();
        assert!(tol::le(s.weight(), slt_lightness_bound(alpha) * w_mst));
        assert!(mst(g).is_subset_of(&s));
        s
    }

    #[test]
    fn all_terminals_gives_mst() {
        let g = Graph::new(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 1.5)]).unwrap();
        let s = check(&g, &[0, 1, 2, 3], 1.5);
        assert_eq!(s, mst(&g));
    }

    #[test]
    fn star_center() {
        let e: Vec<_> = (1..6).map(|i| (0, i, 1.0)).collect();
        let g = Graph::new(6, &e).unwrap();
        let s = check(&g, &[0], 2.0);
        assert_eq!(s, mst(&g));
    }

    #[test]
    fn even_cycles() {
        for m in 2..=8 {
            let n = 2 * m;
            let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
            let g = Graph::new(n, &e).unwrap();
            let s = check(&g, &[0], 2.0);
            assert!(s.len() == n - 1 || s.len() == n);
        }
    }

    #[test]
    fn rejects_bad_alpha() {
        let g = Graph::new(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(slt(&g, &[0], 1.0).unwrap_err(), Error::AlphaOutOfRange(1.0));
        assert!(slt(&g, &[0], f64::NAN).is_err());
        assert_eq!(slt(&g, &[], 2.0).unwrap_err(), Error::EmptySourceSet);
    }
}
