//! Spanning trees of a light spanner, and the two-stage scaling bound.
//!
//! A tree `T` extracted from `H` which in turn spans `G` has, for every
//! `eps`, all but an `eps`-fraction of pairs within `alpha(eps/2) * beta(eps/2)`
//! where `alpha` profiles `H` against `G` and `beta` profiles `T` against `H`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{mst_of, Graph, Subgraph, VertexId};
use crate::metric::MetricSpace;
use crate::metrics::{
    coarse_profile, eps_grid, lemma21_check, lightness, lq_distortion, measure_embedding,
    scaling_profile, DistortionProfile, Lemma21, ScalingBound, ScalingProfile,
};
use crate::paths::{all_pairs, shortest_paths};
use crate::prioritized::{prioritized_spanner, PriorityRanking, PrioritizedSpanner};
use crate::scaling::canonical_ranking;
use crate::slt::slt;
use crate::tol;

/// Stretch used by the `LastMedian` strategy.
pub const LAST_MEDIAN_ALPHA: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeStrategy {
    /// Minimum spanning tree of `h` under the global edge order.
    MstOfSpanner,
    /// Shortest-path tree of a shallow-light tree (stretch 3) of `h`, rooted
    /// at the vertex minimizing the total distance to all others.
    LastMedian,
    /// An externally supplied tree, given by endpoint pairs.
    Plugin(Vec<(VertexId, VertexId)>),
}

impl TreeStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            TreeStrategy::MstOfSpanner => "mst-of-spanner",
            TreeStrategy::LastMedian => "last-median",
            TreeStrategy::Plugin(_) => "plugin",
        }
    }
}

pub fn spanning_tree<'g>(h: &Subgraph<'g>, strategy: &TreeStrategy) -> Result<Subgraph<'g>> {
    if !h.is_connected() {
        let seen = shortest_paths(h, &[0]).err();
        return Err(seen.unwrap_or(Error::NotSpanning {
            graph: h.n(),
            subgraph: h.len(),
        }));
    }
    let g = h.graph();
    let tree = match strategy {
        TreeStrategy::MstOfSpanner => mst_of(h),
        TreeStrategy::LastMedian => last_median(h)?,
        TreeStrategy::Plugin(pairs) => {
            let mut t = g.empty_subgraph();
            for &(u, v) in pairs {
                if u >= g.n() || v >= g.n() {
                    return Err(Error::InvalidVertex {
                        vertex: u.max(v),
                        n: g.n(),
                    });
                }
                match g.find_edge(u, v) {
                    Some(id) if h.contains(id) => {
                        if !t.insert(id) {
                            return Err(Error::NotATree(format!("edge ({u}, {v}) listed twice")));
                        }
                    }
                    _ => {
                        return Err(Error::NotATree(format!(
                            "edge ({u}, {v}) is not in the spanner"
                        )))
                    }
                }
            }
            t
        }
    };
    if !tree.is_spanning_tree() {
        return Err(Error::NotATree(format!(
            "{} edges on {} vertices do not form a spanning tree",
            tree.len(),
            tree.n()
        )));
    }
    Ok(tree)
}

fn last_median<'g>(h: &Subgraph<'g>) -> Result<Subgraph<'g>> {
    let n = h.n();
    let d = all_pairs(h);
    let root = (0..n)
        .map(|r| (d[r * n..(r + 1) * n].iter().sum::<f64>(), r))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, r)| r)
        .expect("nonempty graph");
    let (local, ids) = h.to_graph();
    let light = slt(&local, &[root], LAST_MEDIAN_ALPHA)?;
    let field = shortest_paths(&light, &[root])?;
    let mut tree = h.graph().empty_subgraph();
    tree.extend(field.parent.iter().flatten().map(|&(_, e)| ids[e]));
    Ok(tree)
}

/// `gamma(eps) = alpha(eps / 2) * beta(eps / 2)`.
#[derive(Debug, Clone, Copy)]
pub struct Composed<A, B> {
    pub alpha: A,
    pub beta: B,
}

impl<A: ScalingBound, B: ScalingBound> ScalingBound for Composed<A, B> {
    fn at(&self, eps: f64) -> f64 {
        self.alpha.at(eps / 2.0) * self.beta.at(eps / 2.0)
    }
}

pub fn compose_profiles<A: ScalingBound, B: ScalingBound>(alpha: A, beta: B) -> Composed<A, B> {
    Composed { alpha, beta }
}

/// Which ranking feeds the prioritized spanner.
#[derive(Debug, Clone)]
pub enum RankingChoice {
    Canonical,
    Given(PriorityRanking),
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub eps: f64,
    /// Measured scaling profile of `T` against `G`.
    pub gamma: f64,
    pub gamma_coarse: f64,
    pub gamma_sqrt_eps: f64,
    pub stage1: f64,
    pub stage2: f64,
    /// `stage1 * stage2`, each taken at `eps / 2`.
    pub composed: f64,
    /// Pairs whose end-to-end distortion exceeds `composed`.
    pub exceeding: usize,
    /// `floor(eps * C(n, 2))`.
    pub allowance: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LightTreeReport {
    pub n: usize,
    pub rho: f64,
    pub strategy: String,
    pub lightness_spanner: f64,
    pub lightness_tree: f64,
    pub spanner_edges: usize,
    pub rebuilds: usize,
    pub dist1: f64,
    pub dist2: f64,
    pub dist_inf: f64,
    pub profile: Vec<ProfileRow>,
    pub lemma21: Vec<Lemma21>,
    /// Every row has `exceeding <= allowance` and `gamma <= composed`.
    pub composition_holds: bool,
}

#[derive(Debug)]
pub struct LightTree<'g> {
    pub spanner: PrioritizedSpanner<'g>,
    pub tree: Subgraph<'g>,
    /// `H` against `G`.
    pub stage1: DistortionProfile,
    /// `T` against `H`.
    pub stage2: DistortionProfile,
    /// `T` against `G`.
    pub total: DistortionProfile,
    pub report: LightTreeReport,
}

/// Prioritized spanner with lightness `1 + rho`, then a spanning tree of it,
/// measured end to end.
pub fn light_tree<'g>(
    g: &'g Graph,
    ranking: &RankingChoice,
    rho: f64,
    strategy: &TreeStrategy,
) -> Result<LightTree<'g>> {
    let gm = MetricSpace::of_graph(g);
    let ranking = match ranking {
        RankingChoice::Canonical => canonical_ranking(&gm).ranking,
        RankingChoice::Given(r) => r.clone(),
    };
    let spanner = prioritized_spanner(g, &ranking, rho)?;
    extract(g, &gm, spanner, strategy)
}

/// Second half of [`light_tree`]: a spanning tree of an already built
/// spanner of `g`, whose shortest-path metric is `gm`.
pub fn extract<'g>(
    g: &'g Graph,
    gm: &MetricSpace,
    spanner: PrioritizedSpanner<'g>,
    strategy: &TreeStrategy,
) -> Result<LightTree<'g>> {
    let tree = spanning_tree(&spanner.spanner, strategy)?;
    let hm = MetricSpace::of_subgraph(&spanner.spanner);
    let tm = MetricSpace::of_subgraph(&tree);
    let stage1 = measure_embedding(gm, &hm)?;
    let stage2 = measure_embedding(&hm, &tm)?;
    let total = measure_embedding(gm, &tm)?;
    let report = report(g, &spanner, &tree, strategy, &stage1, &stage2, &total);
    Ok(LightTree {
        spanner,
        tree,
        stage1,
        stage2,
        total,
        report,
    })
}

/// Count, for each `eps` on the grid, the pairs whose end-to-end distortion
/// exceeds the composed per-stage bound.
pub fn composition_rows(
    stage1: &DistortionProfile,
    stage2: &DistortionProfile,
    total: &DistortionProfile,
) -> Vec<ProfileRow> {
    let a = scaling_profile(stage1);
    let b = scaling_profile(stage2);
    let t: ScalingProfile = scaling_profile(total);
    let tc = coarse_profile(total);
    let composed = compose_profiles(|e: f64| a.at(e), |e: f64| b.at(e));
    eps_grid(total.n())
        .into_iter()
        .map(|eps| {
            let bound = composed.at(eps);
            let exceeding = total
                .pairs()
                .iter()
                .filter(|p| !tol::le(p.distortion, bound))
                .count();
            let gamma = t.at(eps);
            ProfileRow {
                eps,
                gamma,
                gamma_coarse: tc.at(eps),
                gamma_sqrt_eps: gamma * eps.sqrt(),
                stage1: a.at(eps / 2.0),
                stage2: b.at(eps / 2.0),
                composed: bound,
                exceeding,
                allowance: t.allowance(eps),
            }
        })
        .collect()
}

fn report(
    g: &Graph,
    spanner: &PrioritizedSpanner<'_>,
    tree: &Subgraph<'_>,
    strategy: &TreeStrategy,
    stage1: &DistortionProfile,
    stage2: &DistortionProfile,
    total: &DistortionProfile,
) -> LightTreeReport {
    let profile = composition_rows(stage1, stage2, total);
    let composition_holds = profile
        .iter()
        .all(|r| r.exceeding <= r.allowance && tol::le(r.gamma, r.composed));
    LightTreeReport {
        n: g.n(),
        rho: spanner.rho,
        strategy: strategy.name().to_string(),
        lightness_spanner: spanner.lightness(),
        lightness_tree: lightness(g, tree),
        spanner_edges: spanner.spanner.len(),
        rebuilds: spanner.rebuilds,
        dist1: lq_distortion(total, 1.0),
        dist2: lq_distortion(total, 2.0),
        dist_inf: lq_distortion(total, f64::INFINITY),
        profile,
        lemma21: vec![
            lemma21_check(total, 1.0),
            lemma21_check(total, 2.0),
        ],
        composition_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchgen::{generate, lower_bound_graph, GraphKind};

    fn c4() -> Graph {
        generate(&GraphKind::Cycle { n: 4 }, 0).unwrap()
    }

    #[test]
    fn tree_is_fixed_point() {
        let g = generate(&GraphKind::Path { n: 6 }, 0).unwrap();
        let h = g.full();
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        for s in [
            TreeStrategy::MstOfSpanner,
            TreeStrategy::LastMedian,
            TreeStrategy::Plugin(pairs),
        ] {
            assert_eq!(spanning_tree(&h, &s).unwrap(), h);
        }
    }

    #[test]
    fn c4_mst_drops_last_edge() {
        let g = c4();
        let t = spanning_tree(&g.full(), &TreeStrategy::MstOfSpanner).unwrap();
        let last = g.edge_count() - 1;
        assert_eq!(t.edge_ids().collect::<Vec<_>>(), (0..last).collect::<Vec<_>>());
    }

    #[test]
    fn c4_last_median_is_shallow_path() {
        let g = c4();
        let h = g.full();
        let t = spanning_tree(&h, &TreeStrategy::LastMedian).unwrap();
        assert!(t.is_spanning_tree());
        let deg_max = (0..4).map(|v| t.neighbors(v).count()).max().unwrap();
        assert!(deg_max <= 2);
        let dh = all_pairs(&h);
        let dt = all_pairs(&t);
        // the root (all vertices tie, so vertex 0)
        for v in 0..4 {
            assert!(dt[v] <= 3.0 * dh[v]);
        }
    }

    #[test]
    fn plugin_validation() {
        let g = c4();
        let h = g.full();
        let bad = TreeStrategy::Plugin(vec![(0, 1), (1, 2)]);
        assert!(matches!(spanning_tree(&h, &bad), Err(Error::NotATree(_))));
        let off = TreeStrategy::Plugin(vec![(0, 2), (1, 2), (2, 3)]);
        assert!(matches!(spanning_tree(&h, &off), Err(Error::NotATree(_))));
        let mut sub = g.empty_subgraph();
        sub.extend([0, 1]);
        assert!(spanning_tree(&sub, &TreeStrategy::MstOfSpanner).is_err());
    }

    #[test]
    fn composition_closed_forms() {
        let one = |_: f64| 1.0;
        let beta = |e: f64| 1.0 / e.sqrt();
        let c = compose_profiles(one, beta);
        assert_eq!(c.at(0.5), beta(0.25));
        let c = compose_profiles(beta, beta);
        for e in [1.0, 0.5, 0.125] {
            assert!((c.at(e) - 2.0 / e).abs() < 1e-12);
        }
    }

    #[test]
    fn tree_input_has_unit_distortion() {
        let g = generate(&GraphKind::Path { n: 10 }, 0).unwrap();
        let lt = light_tree(&g, &RankingChoice::Canonical, 0.5, &TreeStrategy::MstOfSpanner).unwrap();
        assert_eq!(lt.tree, g.full());
        assert_eq!(lt.report.dist_inf, 1.0);
    }

    #[test]
    fn lower_bound_64_lightness() {
        let g = lower_bound_graph(64).unwrap();
        for s in [TreeStrategy::MstOfSpanner, TreeStrategy::LastMedian] {
            let lt = light_tree(&g, &RankingChoice::Canonical, 0.25, &s).unwrap();
            assert!(lt.report.lightness_tree <= lt.report.lightness_spanner);
            assert!(lt.tree.weight() <= 1.25 * 64.0);
            assert!(lt.report.composition_holds);
        }
    }
}
