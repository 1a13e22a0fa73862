//! Terminal spanners and the light prioritized spanner.
//!
//! A terminal spanner for `K` is the lightness reduction applied to
//! `backbone(K) ∪ SLT(K, alpha = 2) ∪ MST`. The prioritized spanner is the
//! union of terminal spanners over the nested prefixes
//! `K_i = {v_j : j <= 2^(2^i)}` of a priority ranking, with per-level slack
//! `delta_i` proportional to `rho / i^2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{mst, Graph, Subgraph, VertexId};
use crate::greedy::terminal_backbone;
use crate::reduction::{reduce, Reduction, SpannerBuilder};
use crate::slt::slt;

/// A permutation of the vertices; position `j` (1-based) holds `v_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityRanking {
    order: Vec<VertexId>,
    rank: Vec<usize>,
}

impl PriorityRanking {
    pub fn new(order: Vec<VertexId>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidRanking(format!("vertex {v} out of range")));
            }
            if rank[v] != 0 {
                return Err(Error::InvalidRanking(format!("vertex {v} ranked twice")));
            }
            rank[v] = pos + 1;
        }
        Ok(PriorityRanking { order, rank })
    }

    pub fn identity(n: usize) -> Self {
        PriorityRanking {
            order: (0..n).collect(),
            rank: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `v_j` for 1-based `j`.
    pub fn vertex(&self, j: usize) -> VertexId {
        self.order[j - 1]
    }

    /// 1-based rank of `v`.
    pub fn rank(&self, v: VertexId) -> usize {
        self.rank[v]
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// The `k` highest-priority vertices.
    pub fn prefix(&self, k: usize) -> &[VertexId] {
        &self.order[..k.min(self.order.len())]
    }
}

/// `ceil(log2 k)` with `ceil(log2 1) = 0`.
pub(crate) fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

/// Distortion constant `3 (2 ceil(log2 k) + 3)` for `K x V` pairs of the base
/// construction, before dividing by `delta`.
pub fn terminal_constant(k: usize) -> f64 {
    3.0 * (2.0 * ceil_log2(k) as f64 + 3.0)
}

/// Base construction for a terminal set: backbone, SLT with `alpha = 2`, MST.
#[derive(Debug, Clone)]
pub struct TerminalBase {
    terminals: Vec<VertexId>,
    is_terminal: Vec<bool>,
}

impl TerminalBase {
    pub fn new(n: usize, terminals: &[VertexId]) -> Result<Self> {
        if terminals.is_empty() {
            return Err(Error::EmptySourceSet);
        }
        let mut is_terminal = vec![false; n];
        for &k in terminals {
            if k >= n {
                return Err(Error::InvalidVertex { vertex: k, n });
            }
            is_terminal[k] = true;
        }
        Ok(TerminalBase {
            terminals: terminals.to_vec(),
            is_terminal,
        })
    }
}

impl SpannerBuilder for TerminalBase {
    fn build<'a>(&self, g: &'a Graph) -> Result<Subgraph<'a>> {
        let backbone = terminal_backbone(g, &self.terminals)?;
        let shallow = slt(g, &self.terminals, 2.0)?;
        let mut out = backbone.spanner.union(&shallow);
        out.extend(mst(g).edge_ids());
        Ok(out)
    }

    fn stretch_bound(&self, u: VertexId, v: VertexId) -> Option<f64> {
        (self.is_terminal[u] || self.is_terminal[v]).then(|| terminal_constant(self.terminals.len()))
    }
}

#[derive(Debug, Clone)]
pub struct TerminalSpanner<'g> {
    pub reduction: Reduction<'g>,
    pub terminals: Vec<VertexId>,
    /// Certified distortion for every pair in `K x V`.
    pub distortion_bound: f64,
}

impl<'g> TerminalSpanner<'g> {
    pub fn spanner(&self) -> &Subgraph<'g> {
        &self.reduction.spanner
    }

    /// Measured lightness of the base construction on the reweighted graph.
    pub fn base_lightness(&self) -> f64 {
        self.reduction.builder_lightness
    }
}

/// Spanner with lightness `1 + delta * l_base` in which every `K x V` pair has
/// distortion at most `3 (2 ceil(log2 k) + 3) / delta`.
pub fn terminal_spanner<'g>(
    g: &'g Graph,
    terminals: &[VertexId],
    delta: f64,
) -> Result<TerminalSpanner<'g>> {
    let base = TerminalBase::new(g.n(), terminals)?;
    let reduction = reduce(&base, g, delta)?;
    Ok(TerminalSpanner {
        reduction,
        terminals: terminals.to_vec(),
        distortion_bound: terminal_constant(terminals.len()) / delta,
    })
}

/// Number of levels: the least `L >= 1` with `2^(2^L) >= n`.
pub fn level_count(n: usize) -> usize {
    let mut l = 1;
    while level_size(l, usize::MAX) < n {
        l += 1;
    }
    l
}

/// `min(2^(2^i), cap)` without overflow.
fn level_size(i: usize, cap: usize) -> usize {
    let exp = 1u32.checked_shl(i as u32).unwrap_or(u32::MAX);
    1usize.checked_shl(exp).unwrap_or(usize::MAX).min(cap)
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    /// 1-based level index.
    pub index: usize,
    /// `|K_i|`: the first `k` ranks.
    pub k: usize,
    pub delta: f64,
    /// Measured base lightness on this level's reweighted graph.
    pub base_lightness: f64,
    /// Certified distortion for `K_i x V`.
    pub distortion_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSchedule {
    pub levels: Vec<Level>,
    /// `Z = sum_i 1/i^2` over the levels.
    pub normalizer: f64,
    /// Common factor applied to every `delta_i`.
    pub scale: f64,
}

impl LevelSchedule {
    /// `sum_i delta_i * l_i`.
    pub fn budget(&self) -> f64 {
        self.levels.iter().map(|l| l.delta * l.base_lightness).sum()
    }
}

#[derive(Debug, Clone)]
pub struct PrioritizedSpanner<'g> {
    pub spanner: Subgraph<'g>,
    pub ranking: PriorityRanking,
    pub schedule: LevelSchedule,
    pub rho: f64,
    /// Schedule rebuilds spent fitting the lightness budget.
    pub rebuilds: usize,
    /// Whether every level contained exactly `mst(g)` among its tree edges.
    pub mst_shared: bool,
}

impl PrioritizedSpanner<'_> {
    /// Certified distortion for pairs whose higher-priority end has rank `j`.
    pub fn certified_bound(&self, j: usize) -> f64 {
        let levels = &self.schedule.levels;
        levels
            .iter()
            .find(|l| j <= l.k)
            .unwrap_or(levels.last().expect("at least one level"))
            .distortion_bound
    }

    pub fn lightness(&self) -> f64 {
        crate::metrics::lightness(self.spanner.graph(), &self.spanner)
    }

    /// Empirical constant `C` in `bound(j) <= C log(j+2) log^2 log(j+4) / rho`.
    pub fn reported_constant(&self) -> f64 {
        (1..=self.ranking.len())
            .map(|j| self.certified_bound(j) * self.rho / polylog_shape(j))
            .fold(0.0, f64::max)
    }
}

/// `log2(j + 2) * (log2 log2(j + 4))^2`.
pub fn polylog_shape(j: usize) -> f64 {
    let a = ((j + 2) as f64).log2();
    let b = ((j + 4) as f64).log2().log2();
    a * b * b
}

const MAX_REBUILDS: usize = 60;
/// Bisection steps spent growing the schedule into unused budget.
const GROW_STEPS: usize = 8;

struct Attempt<'g> {
    scale: f64,
    deltas: Vec<f64>,
    levels: Vec<TerminalSpanner<'g>>,
    spanner: Subgraph<'g>,
    weight: f64,
}

/// Union of terminal spanners over the level schedule, tuned so that
/// `w(H) <= (1 + rho) w(MST)`.
///
/// The schedule starts at `delta_i = rho / (Z i^2)`. If that overshoots the
/// budget, every `delta_i` is shrunk by a common factor until it fits; if it
/// undershoots, the factor is grown by bisection (capped at `delta_1 = 1`) so
/// the unused budget buys smaller distortion bounds.
pub fn prioritized_spanner<'g>(
    g: &'g Graph,
    ranking: &PriorityRanking,
    rho: f64,
) -> Result<PrioritizedSpanner<'g>> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::RhoOutOfRange(rho));
    }
    let n = g.n();
    if ranking.len() != n {
        return Err(Error::InvalidRanking(format!(
            "ranking has {} entries for {n} vertices",
            ranking.len()
        )));
    }
    let tree = mst(g);
    let tree_weight = tree.weight();
    let budget = (1.0 + rho) * tree_weight;
    let count = level_count(n);
    let normalizer: f64 = (1..=count).map(|i| 1.0 / (i * i) as f64).sum();
    let max_scale = normalizer / rho;

    let build = |scale: f64| -> Result<Attempt<'g>> {
        let deltas: Vec<f64> = (1..=count)
            .map(|i| (rho * scale / (normalizer * (i * i) as f64)).min(1.0))
            .collect();
        let levels: Vec<TerminalSpanner<'g>> = (1..=count)
            .into_par_iter()
            .map(|i| terminal_spanner(g, ranking.prefix(level_size(i, n)), deltas[i - 1]))
            .collect::<Result<_>>()?;
        let mut spanner = tree.clone();
        for level in &levels {
            spanner.extend(level.spanner().edge_ids());
        }
        let weight = spanner.weight();
        Ok(Attempt {
            scale,
            deltas,
            levels,
            spanner,
            weight,
        })
    };

    let mut rebuilds = 0;
    let mut best = build(1.0)?;
    // smallest scale known to overshoot
    let mut over: Option<f64> = None;
    while best.weight > budget {
        if rebuilds >= MAX_REBUILDS {
            return Err(Error::InvalidParams(format!(
                "lightness budget not met after {rebuilds} rebuilds (weight {} > {budget})",
                best.weight
            )));
        }
        let excess = best.weight / tree_weight - 1.0;
        let factor = if rebuilds < 3 {
            0.95 * rho / excess
        } else {
            (0.95 * rho / excess).min(0.5)
        };
        over = Some(best.scale);
        best = build(best.scale * factor)?;
        rebuilds += 1;
    }
    if over.is_none() && best.scale < max_scale {
        let top = build(max_scale)?;
        rebuilds += 1;
        if top.weight <= budget {
            best = top;
        } else {
            over = Some(max_scale);
        }
    }
    if let Some(mut hi) = over {
        for _ in 0..GROW_STEPS {
            let mid = (best.scale * hi).sqrt();
            let probe = build(mid)?;
            rebuilds += 1;
            if probe.weight <= budget {
                best = probe;
            } else {
                hi = mid;
            }
        }
    }

    let Attempt {
        scale,
        deltas,
        levels: built,
        spanner,
        ..
    } = best;
    let mst_shared = built.iter().all(|l| l.reduction.mst == tree);
    let levels = built
        .iter()
        .enumerate()
        .map(|(i, l)| Level {
            index: i + 1,
            k: l.terminals.len(),
            delta: deltas[i],
            base_lightness: l.base_lightness(),
            distortion_bound: l.distortion_bound,
        })
        .collect();
    Ok(PrioritizedSpanner {
        spanner,
        ranking: ranking.clone(),
        schedule: LevelSchedule {
            levels,
            normalizer,
            scale,
        },
        rho,
        rebuilds,
        mst_shared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_validation() {
        assert!(PriorityRanking::new(vec![0, 0]).is_err());
        assert!(PriorityRanking::new(vec![0, 2]).is_err());
        let r = PriorityRanking::new(vec![2, 0, 1]).unwrap();
        assert_eq!(r.vertex(1), 2);
        assert_eq!(r.rank(1), 3);
        assert_eq!(r.prefix(2), &[2, 0]);
        assert_eq!(r.prefix(9).len(), 3);
    }

    #[test]
    fn levels() {
        assert_eq!(level_count(1), 1);
        assert_eq!(level_count(4), 1);
        assert_eq!(level_count(5), 2);
        assert_eq!(level_count(16), 2);
        assert_eq!(level_count(17), 3);
        assert_eq!(level_count(256), 3);
        assert_eq!(level_count(257), 4);
        assert_eq!(level_size(1, 100), 4);
        assert_eq!(level_size(3, 100), 100);
        assert_eq!(level_size(7, usize::MAX), usize::MAX);
    }

    #[test]
    fn constants() {
        assert_eq!(terminal_constant(1), 9.0);
        assert_eq!(terminal_constant(4), 21.0);
        assert_eq!(terminal_constant(8), 27.0);
        assert_eq!(ceil_log2(5), 3);
    }

    #[test]
    fn rho_range() {
        let g = Graph::new(2, &[(0, 1, 1.0)]).unwrap();
        let pi = PriorityRanking::identity(2);
        assert!(prioritized_spanner(&g, &pi, 1.0).is_err());
        assert!(prioritized_spanner(&g, &pi, 0.0).is_err());
        let h = prioritized_spanner(&g, &pi, 0.5).unwrap();
        assert_eq!(h.spanner.len(), 1);
        assert_eq!(h.schedule.levels.len(), 1);
    }
}
