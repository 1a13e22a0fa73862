//! Prioritized distortion versus coarse scaling distortion.
//!
//! Density nets give every point a nearby representative of high priority;
//! the canonical ranking built from nets at scales `2^-i` turns any
//! prioritized bound `alpha(j)` into the coarse bound `5 alpha(8 / eps)`.
//! In the other direction, duplicating each point `x_i` into
//! `ceil(mu(i) n)` copies turns a coarse bound `gamma` into the prioritized
//! bound `gamma(mu(i))`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{check_eps, BallIndex, MetricSpace};
use crate::metrics::{measure_embedding, DistortionProfile, ScalingBound};
use crate::prioritized::{ceil_log2, PriorityRanking};
use crate::tol;

/// A set of at most `1/eps` points with every point `v` within `2 R(v, eps)`
/// of the set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityNet {
    pub eps: f64,
    pub points: Vec<usize>,
}

/// Greedy density net: scan points by `R(v, eps)` ascending (ties by id) and
/// keep `v` when it is farther than `2 R(v, eps)` from every kept point.
pub fn density_net(m: &MetricSpace, eps: f64) -> Result<DensityNet> {
    check_eps(eps)?;
    let balls = BallIndex::new(m);
    Ok(net_with(&balls, eps))
}

fn net_with(balls: &BallIndex<'_>, eps: f64) -> DensityNet {
    let m = balls.metric();
    let radius: Vec<f64> = (0..m.n()).map(|v| balls.radius(v, eps)).collect();
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by(|&a, &b| radius[a].total_cmp(&radius[b]).then(a.cmp(&b)));
    let mut points: Vec<usize> = Vec::new();
    for v in order {
        if m.dist_to_set(v, &points) > 2.0 * radius[v] {
            points.push(v);
        }
    }
    DensityNet { eps, points }
}

impl DensityNet {
    /// Check size, coverage, and pairwise disjointness of the balls
    /// `B(v, R(v, eps))` over net points.
    pub fn verify(&self, m: &MetricSpace) -> Result<()> {
        let balls = BallIndex::new(m);
        let cap = tol::floor(1.0 / self.eps);
        if self.points.len() > cap {
            return Err(Error::Certification {
                what: "density net size |N| <= 1/eps".into(),
                u: self.points.len(),
                v: cap,
                value: self.points.len() as f64,
                bound: cap as f64,
            });
        }
        for v in 0..m.n() {
            let d = m.dist_to_set(v, &self.points);
            let r = 2.0 * balls.radius(v, self.eps);
            if !tol::le(d, r) {
                return Err(Error::Certification {
                    what: "density net coverage d(v, N) <= 2R(v, eps)".into(),
                    u: v,
                    v,
                    value: d,
                    bound: r,
                });
            }
        }
        for (i, &a) in self.points.iter().enumerate() {
            let ra = balls.radius(a, self.eps);
            for &b in &self.points[i + 1..] {
                let rb = balls.radius(b, self.eps);
                let shared = (0..m.n()).find(|&x| tol::le(m.dist(a, x), ra) && tol::le(m.dist(b, x), rb));
                if let Some(x) = shared {
                    return Err(Error::Certification {
                        what: format!("density net balls disjoint (shared point {x})"),
                        u: a,
                        v: b,
                        value: m.dist(a, b),
                        bound: ra + rb,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Ranking in which every point of the `2^-i` net precedes every point that
/// first appears at a finer scale.
#[derive(Debug, Clone)]
pub struct CanonicalRanking {
    pub ranking: PriorityRanking,
    /// `N_i` for `eps_i = 2^-i`, `i = 1..ceil(log2 n)`.
    pub nets: Vec<DensityNet>,
}

impl CanonicalRanking {
    /// Check `rank(v) < 2^(i+1)` for every `v` in `N_i`.
    pub fn verify_rank_bound(&self) -> Result<()> {
        for (idx, net) in self.nets.iter().enumerate() {
            let i = idx + 1;
            let cap = 1usize << (i + 1);
            for &v in &net.points {
                let r = self.ranking.rank(v);
                if r >= cap {
                    return Err(Error::Certification {
                        what: format!("canonical rank bound for net {i}"),
                        u: v,
                        v: r,
                        value: r as f64,
                        bound: cap as f64,
                    });
                }
            }
        }
        Ok(())
    }
}

pub fn canonical_ranking(m: &MetricSpace) -> CanonicalRanking {
    let n = m.n();
    let balls = BallIndex::new(m);
    let levels = ceil_log2(n) as usize;
    let nets: Vec<DensityNet> = (1..=levels)
        .map(|i| net_with(&balls, 0.5_f64.powi(i as i32)))
        .collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for net in &nets {
        let mut fresh: Vec<usize> = net.points.iter().copied().filter(|&v| !placed[v]).collect();
        fresh.sort_unstable();
        for v in fresh {
            placed[v] = true;
            order.push(v);
        }
    }
    order.extend((0..n).filter(|&v| !placed[v]));
    CanonicalRanking {
        ranking: PriorityRanking::new(order).expect("permutation by construction"),
        nets,
    }
}

/// Alternate ranks of two rankings, skipping vertices already placed.
pub fn interleave(first: &PriorityRanking, second: &PriorityRanking) -> Result<PriorityRanking> {
    if first.len() != second.len() {
        return Err(Error::InvalidRanking("rankings have different lengths".into()));
    }
    let n = first.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let (mut a, mut b) = (first.order().iter(), second.order().iter());
    while order.len() < n {
        for it in [&mut a, &mut b] {
            if let Some(&v) = it.by_ref().find(|&&v| !placed[v]) {
                placed[v] = true;
                order.push(v);
            }
        }
    }
    PriorityRanking::new(order)
}

/// Which pairs a coarse certificate covers at a given `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sidedness {
    /// Both ends `eps/2`-far from each other.
    Both,
    /// At least one end `eps/2`-far from the other.
    Either,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoarseRow {
    pub u: usize,
    pub v: usize,
    pub eps: f64,
    pub distortion: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoarseCertificate {
    pub sidedness: Sidedness,
    pub rows: Vec<CoarseRow>,
    /// `max distortion / bound` over all pairs.
    pub worst_ratio: f64,
}

/// Check that an embedding with prioritized bound `alpha` (w.r.t. the
/// canonical ranking of `source`) has coarse scaling distortion
/// `5 alpha(min(n, ceil(8 / eps)))`. Each pair is tested at its own largest
/// admissible `eps`, which is where the bound is tightest.
pub fn certify_coarse_scaling<A: Fn(usize) -> f64>(
    source: &MetricSpace,
    target: &MetricSpace,
    ranking: &PriorityRanking,
    alpha: A,
    sidedness: Sidedness,
) -> Result<CoarseCertificate> {
    if canonical_ranking(source).ranking != *ranking {
        return Err(Error::RankingMismatch);
    }
    let profile = measure_embedding(source, target)?;
    certify_profile(&profile, source, alpha, sidedness)
}

/// [`certify_coarse_scaling`] on an already measured profile, without the
/// ranking check.
pub fn certify_profile<A: Fn(usize) -> f64>(
    profile: &DistortionProfile,
    source: &MetricSpace,
    alpha: A,
    sidedness: Sidedness,
) -> Result<CoarseCertificate> {
    let n = source.n();
    let balls = BallIndex::new(source);
    let mut rows = Vec::with_capacity(profile.pair_count());
    let mut worst_ratio = 0.0_f64;
    for p in profile.pairs() {
        let eps = match sidedness {
            Sidedness::Both => p.eps_pair,
            Sidedness::Either => balls.one_sided_farness(p.u, p.v),
        };
        let rank = tol::ceil(8.0 / eps).min(n);
        let bound = 5.0 * alpha(rank);
        if !tol::le(p.distortion, bound) {
            return Err(Error::Certification {
                what: format!("coarse scaling bound 5*alpha(8/eps) at eps={eps}"),
                u: p.u,
                v: p.v,
                value: p.distortion,
                bound,
            });
        }
        worst_ratio = worst_ratio.max(p.distortion / bound);
        rows.push(CoarseRow {
            u: p.u,
            v: p.v,
            eps,
            distortion: p.distortion,
            bound,
        });
    }
    Ok(CoarseCertificate {
        sidedness,
        rows,
        worst_ratio,
    })
}

/// Non-increasing weights over ranks summing to 1.
pub struct WeightFunctionMu {
    f: MuFn,
}

enum MuFn {
    InverseSquare,
    Custom(Box<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl fmt::Debug for WeightFunctionMu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.f {
            MuFn::InverseSquare => f.write_str("WeightFunctionMu(6/(pi j)^2)"),
            MuFn::Custom(_) => f.write_str("WeightFunctionMu(custom)"),
        }
    }
}

impl Default for WeightFunctionMu {
    /// `mu(j) = 6 / (pi j)^2`.
    fn default() -> Self {
        WeightFunctionMu {
            f: MuFn::InverseSquare,
        }
    }
}

impl WeightFunctionMu {
    /// Accept a custom weight function after checking positivity and
    /// monotonicity on ranks `1..=n`, and that the partial sum plus the
    /// caller's tail value `sum_{j > n} mu(j)` equals 1.
    pub fn custom<F>(f: F, n: usize, tail: f64) -> Result<Self>
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        let mut prev = f64::INFINITY;
        let mut sum = 0.0;
        for j in 1..=n {
            let x = f(j);
            if !(x > 0.0) || x > prev {
                return Err(Error::InvalidParams(format!(
                    "mu must be positive and non-increasing (rank {j})"
                )));
            }
            prev = x;
            sum += x;
        }
        if prev > 1.0 || sum > 1.0 + tol::REL_TOL || !(tail >= 0.0) || (sum + tail - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "mu partial sum {sum} plus tail {tail} must equal 1"
            )));
        }
        Ok(WeightFunctionMu {
            f: MuFn::Custom(Box::new(f)),
        })
    }

    pub fn at(&self, j: usize) -> f64 {
        match &self.f {
            MuFn::InverseSquare => {
                let x = std::f64::consts::PI * j as f64;
                6.0 / (x * x)
            }
            MuFn::Custom(f) => f(j),
        }
    }
}

/// Each `x_i` (rank `i`) replaced by `ceil(mu(i) n)` copies at mutual distance
/// `delta` = half the minimum distance of the original metric.
#[derive(Debug, Clone)]
pub struct DuplicatedSpace {
    pub metric: MetricSpace,
    /// `groups[i - 1]` holds the `Z`-points of rank `i`, ascending.
    pub groups: Vec<Vec<usize>>,
    pub delta: f64,
    pub ranking: PriorityRanking,
}

impl DuplicatedSpace {
    pub fn len(&self) -> usize {
        self.metric.n()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.n() == 0
    }

    /// Representative `u_i`: the lowest-id point of `X_i`.
    pub fn representative(&self, rank: usize) -> usize {
        self.groups[rank - 1][0]
    }

    /// Check `|Z| <= 2n`, the triangle inequality on `Z`, and that for
    /// `i < j` both balls of radius `d_Z(u_i, u_j)` around `u_i` and `u_j`
    /// contain `X_i`.
    pub fn certify(&self) -> Result<()> {
        let n = self.groups.len();
        if self.len() > 2 * n {
            return Err(Error::Certification {
                what: "duplicated space size |Z| <= 2n".into(),
                u: self.len(),
                v: n,
                value: self.len() as f64,
                bound: (2 * n) as f64,
            });
        }
        if let Some((a, b, c)) = self.metric.check_triangle() {
            return Err(Error::Certification {
                what: format!("triangle inequality on Z via {b}"),
                u: a,
                v: c,
                value: self.metric.dist(a, c),
                bound: self.metric.dist(a, b) + self.metric.dist(b, c),
            });
        }
        let z = &self.metric;
        for i in 1..=n {
            let ui = self.representative(i);
            for j in (i + 1)..=n {
                let uj = self.representative(j);
                let r = z.dist(ui, uj);
                for &x in &self.groups[i - 1] {
                    if !tol::le(z.dist(ui, x), r) || !tol::le(z.dist(uj, x), r) {
                        return Err(Error::Certification {
                            what: format!("X_{i} inside both balls of radius d(u_{i}, u_{j})"),
                            u: ui,
                            v: uj,
                            value: z.dist(ui, x).max(z.dist(uj, x)),
                            bound: r,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn duplicate_metric(
    m: &MetricSpace,
    ranking: &PriorityRanking,
    mu: &WeightFunctionMu,
) -> Result<DuplicatedSpace> {
    let n = m.n();
    if n < 2 {
        return Err(Error::DegenerateMetric("need at least two points".into()));
    }
    if ranking.len() != n {
        return Err(Error::InvalidRanking(format!(
            "ranking has {} entries for {n} points",
            ranking.len()
        )));
    }
    let mut min = f64::INFINITY;
    for a in 0..n {
        for b in (a + 1)..n {
            min = min.min(m.dist(a, b));
        }
    }
    if !(min > 0.0) {
        return Err(Error::DegenerateMetric("two points at distance 0".into()));
    }
    let delta = min / 2.0;
    let mut groups = Vec::with_capacity(n);
    let mut owner = Vec::new();
    for i in 1..=n {
        let size = tol::ceil(mu.at(i) * n as f64).max(1);
        groups.push((owner.len()..owner.len() + size).collect::<Vec<_>>());
        owner.extend(std::iter::repeat(ranking.vertex(i)).take(size));
    }
    let size = owner.len();
    let mut d = vec![0.0; size * size];
    for a in 0..size {
        for b in 0..size {
            if a != b {
                d[a * size + b] = if owner[a] == owner[b] {
                    delta
                } else {
                    m.dist(owner[a], owner[b])
                };
            }
        }
    }
    Ok(DuplicatedSpace {
        metric: MetricSpace::from_matrix_unchecked(size, d),
        groups,
        delta,
        ranking: ranking.clone(),
    })
}

/// The embedding of `X` obtained by restricting an embedding of `Z` to the
/// group representatives, with its certified per-rank bound `gamma(mu(i))`.
#[derive(Debug, Clone)]
pub struct PulledBack {
    /// Target distances between original points (indexed by point id).
    pub target: MetricSpace,
    /// `bounds[i - 1] = gamma(mu(i))`.
    pub bounds: Vec<f64>,
    /// Measured `max_{j > i} dist(x_i, x_j)` per rank.
    pub per_rank: Vec<f64>,
}

impl PulledBack {
    /// Certified prioritized bound at 1-based rank `j` (clamped to `n`).
    pub fn bound(&self, j: usize) -> f64 {
        self.bounds[j.clamp(1, self.bounds.len()) - 1]
    }
}

/// Restrict an embedding of `Z` (given as target distances on `Z`'s points)
/// to the representatives and verify the prioritized bound `gamma(mu(i))`.
pub fn pull_back_embedding<G: ScalingBound + ?Sized>(
    source: &MetricSpace,
    dz: &DuplicatedSpace,
    fz: &MetricSpace,
    gamma: &G,
    mu: &WeightFunctionMu,
) -> Result<PulledBack> {
    let n = dz.groups.len();
    if fz.n() != dz.len() || source.n() != n {
        return Err(Error::InvalidParams("embedding size does not match Z".into()));
    }
    for a in 0..fz.n() {
        for b in (a + 1)..fz.n() {
            if !tol::le(dz.metric.dist(a, b), fz.dist(a, b)) {
                return Err(Error::ContractiveEmbedding {
                    u: a,
                    v: b,
                    source_dist: dz.metric.dist(a, b),
                    target_dist: fz.dist(a, b),
                });
            }
        }
    }
    let rep: Vec<usize> = (0..n)
        .map(|x| dz.representative(dz.ranking.rank(x)))
        .collect();
    let mut d = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                d[a * n + b] = fz.dist(rep[a], rep[b]);
            }
        }
    }
    let target = MetricSpace::from_matrix_unchecked(n, d);
    let bounds: Vec<f64> = (1..=n).map(|i| gamma.at(mu.at(i))).collect();
    let mut per_rank = vec![1.0_f64; n];
    for i in 1..=n {
        let xi = dz.ranking.vertex(i);
        for j in (i + 1)..=n {
            let xj = dz.ranking.vertex(j);
            let s = source.dist(xi, xj);
            let dist = target.dist(xi, xj) / s;
            per_rank[i - 1] = per_rank[i - 1].max(dist);
            if !tol::le(dist, bounds[i - 1]) {
                return Err(Error::Certification {
                    what: format!("pulled-back prioritized bound gamma(mu({i}))"),
                    u: xi,
                    v: xj,
                    value: dist,
                    bound: bounds[i - 1],
                });
            }
        }
    }
    Ok(PulledBack {
        target,
        bounds,
        per_rank,
    })
}
