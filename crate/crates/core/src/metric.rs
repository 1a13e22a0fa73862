//! Finite metric spaces, metric closures, and ball/radius queries.
//!
//! Balls are closed and contain their center: `B(v, r) = {u : d(u, v) <= r}`.
//! The mass threshold for `R(v, eps)` is `ceil(eps * n)` points.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Subgraph, VertexId};
use crate::paths::{dijkstra, DistanceField};
use crate::tol;

/// Explicit symmetric distance matrix over points `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    d: Vec<f64>,
}

impl MetricSpace {
    /// Wrap a row-major matrix; checks shape, symmetry, zero diagonal, and
    /// finite nonnegative entries. The triangle inequality is not checked
    /// here, see [`MetricSpace::check_triangle`].
    pub fn from_matrix(n: usize, d: Vec<f64>) -> Result<Self> {
        if n == 0 || d.len() != n * n {
            return Err(Error::DegenerateMetric(format!(
                "expected {n}x{n} matrix, got {} entries",
                d.len()
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::DegenerateMetric(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let a = d[i * n + j];
                if !(a >= 0.0) || !a.is_finite() {
                    return Err(Error::DegenerateMetric(format!(
                        "invalid distance {a} at ({i}, {j})"
                    )));
                }
                if !tol::approx_eq(a, d[j * n + i]) {
                    return Err(Error::DegenerateMetric(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(MetricSpace { n, d })
    }

    pub(crate) fn from_matrix_unchecked(n: usize, d: Vec<f64>) -> Self {
        debug_assert_eq!(d.len(), n * n);
        MetricSpace { n, d }
    }

    /// Shortest-path metric of a connected graph over all of its vertices.
    pub fn of_graph(g: &Graph) -> Self {
        MetricSpace {
            n: g.n(),
            d: crate::paths::all_pairs(g),
        }
    }

    /// Shortest-path metric of a spanning subgraph; unreachable pairs are
    /// infinite.
    pub fn of_subgraph(h: &Subgraph<'_>) -> Self {
        MetricSpace {
            n: h.n(),
            d: crate::paths::all_pairs(h),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.d
    }

    /// Distance from `v` to the nearest point of `set`.
    pub fn dist_to_set(&self, v: usize, set: &[usize]) -> f64 {
        set.iter()
            .map(|&u| self.dist(v, u))
            .fold(f64::INFINITY, f64::min)
    }

    /// Restriction to a list of points, in the order given.
    pub fn restrict(&self, points: &[usize]) -> MetricSpace {
        let k = points.len();
        let mut d = vec![0.0; k * k];
        for (a, &p) in points.iter().enumerate() {
            for (b, &q) in points.iter().enumerate() {
                d[a * k + b] = self.dist(p, q);
            }
        }
        MetricSpace { n: k, d }
    }

    /// Exhaustive triangle-inequality check; returns the first violating
    /// triple `(a, b, c)` with `d(a, c) > d(a, b) + d(b, c)`.
    pub fn check_triangle(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        (0..n).into_par_iter().find_map_first(|a| {
            for b in 0..n {
                let ab = self.dist(a, b);
                for c in 0..n {
                    if !tol::le(self.dist(a, c), ab + self.dist(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        })
    }

    pub fn ball_size(&self, v: usize, r: f64) -> usize {
        self.row(v).iter().filter(|&&x| tol::le(x, r)).count()
    }

    /// `R(v, eps)`: the smallest radius whose closed ball holds `ceil(eps n)` points.
    pub fn radius(&self, v: usize, eps: f64) -> Result<f64> {
        check_eps(eps)?;
        let mut row = self.row(v).to_vec();
        row.sort_by(f64::total_cmp);
        Ok(row[mass(eps, self.n) - 1])
    }

    /// The largest `eps` for which `u` and `v` are both `eps/2`-far from each
    /// other: `2 min(|B(u, d)|, |B(v, d)|) / n`, clamped to 1.
    pub fn farness(&self, u: usize, v: usize) -> Result<f64> {
        if u == v {
            return Err(Error::IdenticalPoints(u));
        }
        let d = self.dist(u, v);
        let m = self.ball_size(u, d).min(self.ball_size(v, d));
        Ok(farness_from_count(m, self.n))
    }
}

/// `ceil(eps * n)` clamped to `[1, n]`, absorbing floating-point noise in the product.
pub fn mass(eps: f64, n: usize) -> usize {
    tol::ceil(eps * n as f64).clamp(1, n)
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps))
    }
}

pub(crate) fn farness_from_count(count: usize, n: usize) -> f64 {
    (2.0 * count as f64 / n as f64).min(1.0)
}

/// Per-point sorted distance rows for fast ball and radius queries.
#[derive(Debug, Clone)]
pub struct BallIndex<'m> {
    metric: &'m MetricSpace,
    sorted: Vec<Vec<f64>>,
}

impl<'m> BallIndex<'m> {
    pub fn new(metric: &'m MetricSpace) -> Self {
        let sorted = (0..metric.n)
            .into_par_iter()
            .map(|v| {
                let mut row = metric.row(v).to_vec();
                row.sort_by(f64::total_cmp);
                row
            })
            .collect();
        BallIndex { metric, sorted }
    }

    pub fn metric(&self) -> &'m MetricSpace {
        self.metric
    }

    pub fn ball_size(&self, v: usize, r: f64) -> usize {
        self.sorted[v].partition_point(|&x| tol::le(x, r))
    }

    pub fn radius(&self, v: usize, eps: f64) -> f64 {
        self.sorted[v][mass(eps, self.metric.n) - 1]
    }

    pub fn farness(&self, u: usize, v: usize) -> f64 {
        let d = self.metric.dist(u, v);
        farness_from_count(self.ball_size(u, d).min(self.ball_size(v, d)), self.metric.n)
    }

    /// Largest `eps` for which at least one of the two points is `eps/2`-far
    /// from the other.
    pub fn one_sided_farness(&self, u: usize, v: usize) -> f64 {
        let d = self.metric.dist(u, v);
        farness_from_count(self.ball_size(u, d).max(self.ball_size(v, d)), self.metric.n)
    }
}

/// Complete graph over a terminal set weighted by host shortest-path
/// distances, with the host paths that realize each closure edge.
#[derive(Debug, Clone)]
pub struct MetricClosure {
    terminals: Vec<VertexId>,
    metric: MetricSpace,
    fields: Vec<DistanceField>,
}

impl MetricClosure {
    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    /// Distances indexed by terminal position, not by host vertex id.
    pub fn metric(&self) -> &MetricSpace {
        &self.metric
    }

    /// Host edges of a shortest path between terminals at positions `a` and `b`.
    pub fn path(&self, a: usize, b: usize) -> Vec<EdgeId> {
        self.fields[a].path_edges(self.terminals[b])
    }

    pub fn field(&self, a: usize) -> &DistanceField {
        &self.fields[a]
    }
}

pub fn metric_closure(g: &Graph, terminals: &[VertexId]) -> Result<MetricClosure> {
    if terminals.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    let n = g.n();
    let mut seen = vec![false; n];
    for &k in terminals {
        if k >= n {
            return Err(Error::InvalidVertex { vertex: k, n });
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::InvalidParams(format!("duplicate terminal {k}")));
        }
    }
    let fields: Vec<DistanceField> = terminals
        .par_iter()
        .map(|&k| dijkstra(g, &[k], f64::INFINITY))
        .collect();
    let k = terminals.len();
    let mut d = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..k {
            d[a * k + b] = fields[a].dist[terminals[b]];
        }
    }
    // symmetrize against rounding in path sums taken from opposite ends
    for a in 0..k {
        for b in (a + 1)..k {
            let m = d[a * k + b].min(d[b * k + a]);
            d[a * k + b] = m;
            d[b * k + a] = m;
        }
    }
    Ok(MetricClosure {
        terminals: terminals.to_vec(),
        metric: MetricSpace { n: k, d },
        fields,
    })
}
