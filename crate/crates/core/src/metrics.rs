//! Distortion measurement: pair distortions, lightness, `l_q` moments,
//! scaling / coarse-scaling / prioritized profiles, and the moment bound
//! obtained by integrating a scaling profile.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{mst, Graph, Subgraph, VertexId};
use crate::metric::{BallIndex, MetricSpace};
use crate::prioritized::PriorityRanking;
use crate::tol;

/// Largest instance measured exactly; the CLI refuses anything bigger.
pub const MAX_EXACT_N: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDistortion {
    pub u: VertexId,
    pub v: VertexId,
    /// Distance in the host (source) metric.
    pub source: f64,
    /// Distance in the spanner / target metric.
    pub target: f64,
    pub distortion: f64,
    /// Largest `eps` at which both ends are `eps/2`-far from each other.
    pub eps_pair: f64,
}

/// All `C(n, 2)` pair distortions of one embedding.
#[derive(Debug, Clone)]
pub struct DistortionProfile {
    n: usize,
    pairs: Vec<PairDistortion>,
}

impl DistortionProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[PairDistortion] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Distortion of the pair `{u, v}`, `u != v`.
    pub fn pair(&self, u: VertexId, v: VertexId) -> &PairDistortion {
        let (a, b) = (u.min(v), u.max(v));
        // row-major upper triangle
        let idx = a * self.n - a * (a + 1) / 2 + (b - a - 1);
        &self.pairs[idx]
    }

    pub fn min_distortion(&self) -> f64 {
        self.pairs.iter().map(|p| p.distortion).fold(f64::INFINITY, f64::min)
    }

    pub fn max_distortion(&self) -> f64 {
        self.pairs.iter().map(|p| p.distortion).fold(1.0, f64::max)
    }

    pub fn worst_pair(&self) -> Option<&PairDistortion> {
        self.pairs
            .iter()
            .max_by(|a, b| a.distortion.total_cmp(&b.distortion))
    }
}

fn ratio(source: f64, target: f64) -> f64 {
    if source > 0.0 {
        target / source
    } else if target > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Pair distortions of an embedding given by two metrics on the same points.
pub fn measure_embedding(source: &MetricSpace, target: &MetricSpace) -> Result<DistortionProfile> {
    let n = source.n();
    if target.n() != n {
        return Err(Error::NotSpanning {
            graph: n,
            subgraph: target.n(),
        });
    }
    let balls = BallIndex::new(source);
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            let s = source.dist(u, v);
            let t = target.dist(u, v);
            if !t.is_finite() {
                return Err(Error::Disconnected { u, v });
            }
            if !tol::le(s, t) {
                return Err(Error::ContractiveEmbedding {
                    u,
                    v,
                    source_dist: s,
                    target_dist: t,
                });
            }
            pairs.push(PairDistortion {
                u,
                v,
                source: s,
                target: t,
                distortion: ratio(s, t),
                eps_pair: balls.farness(u, v),
            });
        }
    }
    Ok(DistortionProfile { n, pairs })
}

/// All-pairs distortion of a spanning subgraph against its host graph.
pub fn measure(g: &Graph, h: &Subgraph<'_>) -> Result<DistortionProfile> {
    if h.n() != g.n() {
        return Err(Error::NotSpanning {
            graph: g.n(),
            subgraph: h.n(),
        });
    }
    let source = MetricSpace::of_graph(g);
    let target = MetricSpace::from_matrix_unchecked(g.n(), crate::paths::all_pairs(h));
    measure_embedding(&source, &target)
}

/// `w(h) / w(mst(g))`.
pub fn lightness(g: &Graph, h: &Subgraph<'_>) -> f64 {
    let t = mst(g).weight();
    let w = h.weight();
    if t > 0.0 {
        w / t
    } else if w > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Power mean of pair distortions; `q = f64::INFINITY` gives the maximum.
pub fn lq_distortion(p: &DistortionProfile, q: f64) -> f64 {
    assert!(q >= 1.0, "l_q distortion needs q >= 1, got {q}");
    if p.pairs.is_empty() {
        return 1.0;
    }
    if q.is_infinite() {
        return p.max_distortion();
    }
    let mean = p.pairs.iter().map(|x| x.distortion.powf(q)).sum::<f64>() / p.pairs.len() as f64;
    mean.powf(1.0 / q)
}

/// Anything that bounds distortion as a function of `eps` in `(0, 1]`.
pub trait ScalingBound {
    fn at(&self, eps: f64) -> f64;
}

impl<F: Fn(f64) -> f64> ScalingBound for F {
    fn at(&self, eps: f64) -> f64 {
        self(eps)
    }
}

/// Empirical scaling distortion: `at(eps)` is the smallest value exceeded by
/// at most `floor(eps * N)` of the `N` pairs.
#[derive(Debug, Clone)]
pub struct ScalingProfile {
    sorted_desc: Vec<f64>,
}

impl ScalingProfile {
    pub fn pair_count(&self) -> usize {
        self.sorted_desc.len()
    }

    pub fn sorted_desc(&self) -> &[f64] {
        &self.sorted_desc
    }

    /// How many pairs may exceed the profile value at `eps`.
    pub fn allowance(&self, eps: f64) -> usize {
        floor_count(eps, self.sorted_desc.len())
    }
}

fn floor_count(eps: f64, n: usize) -> usize {
    tol::floor((eps * n as f64).max(0.0))
}

impl ScalingBound for ScalingProfile {
    fn at(&self, eps: f64) -> f64 {
        let n = self.sorted_desc.len();
        if n == 0 {
            return 1.0;
        }
        let k = floor_count(eps, n);
        self.sorted_desc[k.min(n - 1)]
    }
}

pub fn scaling_profile(p: &DistortionProfile) -> ScalingProfile {
    let mut sorted_desc: Vec<f64> = p.pairs.iter().map(|x| x.distortion).collect();
    sorted_desc.sort_by(|a, b| b.total_cmp(a));
    ScalingProfile { sorted_desc }
}

/// Empirical coarse scaling distortion: `at(eps)` is the largest distortion
/// among pairs that are mutually `eps/2`-far (1 if there are none).
#[derive(Debug, Clone)]
pub struct CoarseProfile {
    /// `(eps_pair, running max distortion)` sorted by `eps_pair` descending.
    steps: Vec<(f64, f64)>,
}

impl CoarseProfile {
    fn from_points(mut pts: Vec<(f64, f64)>) -> Self {
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut run = 1.0_f64;
        let steps = pts
            .into_iter()
            .map(|(e, d)| {
                run = run.max(d);
                (e, run)
            })
            .collect();
        CoarseProfile { steps }
    }
}

impl ScalingBound for CoarseProfile {
    fn at(&self, eps: f64) -> f64 {
        let k = self.steps.partition_point(|&(e, _)| tol::le(eps, e));
        if k == 0 {
            1.0
        } else {
            self.steps[k - 1].1
        }
    }
}

pub fn coarse_profile(p: &DistortionProfile) -> CoarseProfile {
    CoarseProfile::from_points(p.pairs.iter().map(|x| (x.eps_pair, x.distortion)).collect())
}

/// Coarse profile restricted to the one-sided condition: a pair counts at
/// `eps` when at least one end is `eps/2`-far from the other.
pub fn one_sided_coarse_profile(p: &DistortionProfile, source: &MetricSpace) -> CoarseProfile {
    let balls = BallIndex::new(source);
    CoarseProfile::from_points(
        p.pairs
            .iter()
            .map(|x| (balls.one_sided_farness(x.u, x.v), x.distortion))
            .collect(),
    )
}

/// Per-rank maxima `alpha(j) = max_{i > j} dist(v_j, v_i)` and their running
/// maximum, the monotone envelope a prioritized bound must dominate.
#[derive(Debug, Clone, Serialize)]
pub struct PrioritizedProfile {
    /// Index `j - 1` holds `alpha(j)` for `j = 1..n-1`.
    pub per_rank: Vec<f64>,
    pub envelope: Vec<f64>,
}

impl PrioritizedProfile {
    /// Envelope at 1-based rank `j`, clamped into `[1, n - 1]`.
    pub fn envelope_at(&self, j: usize) -> f64 {
        if self.envelope.is_empty() {
            return 1.0;
        }
        self.envelope[j.clamp(1, self.envelope.len()) - 1]
    }
}

pub fn prioritized_profile(p: &DistortionProfile, ranking: &PriorityRanking) -> PrioritizedProfile {
    let n = p.n;
    let mut per_rank = vec![1.0_f64; n.saturating_sub(1)];
    for x in &p.pairs {
        let j = ranking.rank(x.u).min(ranking.rank(x.v));
        per_rank[j - 1] = per_rank[j - 1].max(x.distortion);
    }
    let mut run = 1.0_f64;
    let envelope = per_rank
        .iter()
        .map(|&a| {
            run = run.max(a);
            run
        })
        .collect();
    PrioritizedProfile { per_rank, envelope }
}

/// `{2^-1, 2^-2, ..., 2^-ceil(log2 C(n, 2))}`.
pub fn eps_grid(n: usize) -> Vec<f64> {
    let pairs = n * n.saturating_sub(1) / 2;
    let steps = crate::prioritized::ceil_log2(pairs).max(1);
    (1..=steps).map(|i| 0.5_f64.powi(i as i32)).collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Lemma21 {
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Compare `dist_q` with `(2 * integral_{1/(2N)}^1 gamma(x)^q dx)^(1/q)` for the
/// empirical scaling profile. The profile is a step function on the
/// breakpoints `k / N`, so the integral is evaluated exactly.
pub fn lemma21_check(p: &DistortionProfile, q: f64) -> Lemma21 {
    assert!(q >= 1.0 && q.is_finite(), "q must be finite and >= 1");
    let lhs = lq_distortion(p, q);
    let prof = scaling_profile(p);
    let big_n = prof.pair_count();
    if big_n == 0 {
        return Lemma21 {
            q,
            lhs,
            rhs: 1.0,
            pass: true,
        };
    }
    let nf = big_n as f64;
    // value sorted_desc[k] holds on [k/N, (k+1)/N)
    let mut integral = 0.0;
    for (k, &d) in prof.sorted_desc().iter().enumerate() {
        let lo = (k as f64 / nf).max(0.5 / nf);
        let hi = (k + 1) as f64 / nf;
        if hi > lo {
            integral += (hi - lo) * d.powf(q);
        }
    }
    let rhs = (2.0 * integral).powf(1.0 / q);
    Lemma21 {
        q,
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + 1e-6),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        let e: Vec<_> = (0..4).map(|i| (i, (i + 1) % 4, 1.0)).collect();
        Graph::new(4, &e).unwrap()
    }

    fn lower_bound(n: usize) -> Graph {
        crate::benchgen::lower_bound_graph(n).unwrap()
    }

    #[test]
    fn identity_profile() {
        let g = c4();
        let p = measure(&g, &g.full()).unwrap();
        assert_eq!(p.pair_count(), 6);
        assert!(p.pairs().iter().all(|x| x.distortion == 1.0));
        for q in [1.0, 2.0, f64::INFINITY] {
            assert_eq!(lq_distortion(&p, q), 1.0);
        }
        assert_eq!(coarse_profile(&p).at(0.3), 1.0);
    }

    #[test]
    fn cycle_to_path() {
        let g = c4();
        let h = g.subgraph([0, 1, 2]).unwrap();
        let p = measure(&g, &h).unwrap();
        let mut d: Vec<f64> = p.pairs().iter().map(|x| x.distortion).collect();
        d.sort_by(f64::total_cmp);
        assert_eq!(d, vec![1.0, 1.0, 1.0, 1.0, 1.0, 3.0]);
        assert_eq!(p.pair(3, 0).distortion, 3.0);
        assert!((lq_distortion(&p, 1.0) - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(lq_distortion(&p, f64::INFINITY), 3.0);
        let s = scaling_profile(&p);
        assert_eq!(s.at(1.0 / 6.0 - 1e-6), 3.0);
        assert_eq!(s.at(1.0 / 6.0), 1.0);
        assert_eq!(s.at(0.01), 3.0);
        assert_eq!(s.at(1.0), 1.0);
        let l = lemma21_check(&p, 1.0);
        assert!(l.pass);
        // 2 * (3/12 + 5/6) = 13/6
        assert!((l.rhs - 13.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn prioritized_on_path() {
        let g = c4();
        let h = g.subgraph([0, 1, 2]).unwrap();
        let p = measure(&g, &h).unwrap();
        let pi = PriorityRanking::new(vec![0, 1, 2, 3]).unwrap();
        let a = prioritized_profile(&p, &pi);
        assert_eq!(a.per_rank, vec![3.0, 1.0, 1.0]);
        let pi = PriorityRanking::new(vec![1, 2, 0, 3]).unwrap();
        let a = prioritized_profile(&p, &pi);
        assert_eq!(a.per_rank, vec![1.0, 1.0, 3.0]);
        assert_eq!(a.envelope, vec![1.0, 1.0, 3.0]);
        assert_eq!(a.envelope_at(99), 3.0);
    }

    #[test]
    fn lower_bound_instance_mst() {
        let g = lower_bound(8);
        let t = mst(&g);
        let p = measure(&g, &t).unwrap();
        assert_eq!(p.pair(0, 7).distortion, 3.5);
        assert_eq!(lightness(&g, &t), 1.0);
        let all = lightness(&g, &g.full());
        assert!((all - (8.0 + 2.0 * (36.0 - 8.0)) / 8.0).abs() < 1e-12);
        let mut h = t.clone();
        h.insert(g.find_edge(0, 2).unwrap());
        assert!((lightness(&g, &h) - 10.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn single_stretched_pair_coarse() {
        let c = CoarseProfile::from_points(vec![(0.3, 4.0), (1.0, 1.0), (0.8, 1.0)]);
        assert_eq!(c.at(0.1), 4.0);
        assert_eq!(c.at(0.3), 4.0);
        assert_eq!(c.at(0.31), 1.0);
        assert_eq!(c.at(1.0), 1.0);
    }

    #[test]
    fn grid_matches_pair_count() {
        assert_eq!(eps_grid(4).len(), 3);
        assert_eq!(eps_grid(2), vec![0.5]);
        assert_eq!(*eps_grid(256).last().unwrap(), 0.5_f64.powi(15));
    }

    #[test]
    fn contraction_detected() {
        let a = MetricSpace::from_matrix(2, vec![0.0, 2.0, 2.0, 0.0]).unwrap();
        let b = MetricSpace::from_matrix(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            measure_embedding(&a, &b),
            Err(Error::ContractiveEmbedding { u: 0, v: 1, .. })
        ));
    }
}
