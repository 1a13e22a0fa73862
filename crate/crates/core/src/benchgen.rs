//! Benchmark instances: the lightness/average-distortion lower-bound graph,
//! its verifier, and seeded generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DisjointSets, Graph, Subgraph, VertexId};
use crate::metrics::{lightness, lq_distortion, measure};
use crate::paths::dijkstra;

/// Complete graph on `v_0..v_n` with `w(v_i, v_j) = 1` if `|i - j| = 1` and 2
/// otherwise. The unit path is its MST, of weight `n`.
pub fn lower_bound_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("lower-bound graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity((n + 1) * n / 2);
    for i in 0..=n {
        for j in (i + 1)..=n {
            edges.push((i, j, if j == i + 1 { 1.0 } else { 2.0 }));
        }
    }
    Graph::new(n + 1, &edges)
}

/// Outcome of checking one light subgraph of the lower-bound graph.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundVerdict {
    pub n: usize,
    pub rho: f64,
    pub lightness: f64,
    pub dist1: f64,
    /// `1 / (128 rho)`.
    pub threshold: f64,
    /// Weight-2 edges in the subgraph.
    pub heavy_edges: usize,
    /// `k = ceil(rho n)`.
    pub budget: usize,
    /// Vertices incident to a weight-2 edge (`S`).
    pub touched: usize,
    /// `|N|`: vertices within `1/(32 rho)` unit steps of `S`.
    pub near: usize,
    /// `min |F_u|` over `u` outside `N`.
    pub min_far: usize,
    pub ledger_ok: bool,
    pub touched_ok: bool,
    pub near_ok: bool,
    pub far_ok: bool,
    pub pass: bool,
}

/// Accounting identity behind the lower bound: a connected spanning subgraph
/// with `heavy` weight-2 edges weighs at least `n + heavy`, so lightness at
/// most `1 + rho` forces `heavy <= ceil(rho n)`.
pub fn check_ledger(n: usize, weight: f64, heavy: usize, rho: f64) -> Result<()> {
    let floor = (n + heavy) as f64;
    if weight < floor {
        return Err(Error::Certification {
            what: "lower-bound ledger w(H) >= n + q".into(),
            u: heavy,
            v: n,
            value: floor,
            bound: weight,
        });
    }
    let budget = crate::tol::ceil(rho * n as f64);
    if weight <= (1.0 + rho) * n as f64 && heavy > budget {
        return Err(Error::Certification {
            what: "lower-bound ledger q <= ceil(rho n)".into(),
            u: heavy,
            v: budget,
            value: heavy as f64,
            bound: budget as f64,
        });
    }
    Ok(())
}

/// Check that a subgraph of `lower_bound_graph(n)` with lightness at most
/// `1 + rho` has average distortion at least `1 / (128 rho)`, reporting the
/// intermediate counting quantities of the argument.
pub fn verify_lower_bound(g: &Graph, h: &Subgraph<'_>, rho: f64) -> Result<LowerBoundVerdict> {
    let n = g.n() - 1;
    if n < 32 {
        return Err(Error::InvalidParams(format!("lower-bound check needs n >= 32, got {n}")));
    }
    if !(rho >= 1.0 / n as f64 && rho <= 1.0 / 32.0) {
        return Err(Error::InvalidParams(format!(
            "rho must lie in [1/n, 1/32], got {rho}"
        )));
    }
    let light = lightness(g, h);
    if light > 1.0 + rho {
        return Err(Error::NotApplicable {
            lightness: light,
            rho,
        });
    }
    let heavy: Vec<_> = h.edges().filter(|e| e.weight > 1.0).collect();
    let budget = crate::tol::ceil(rho * n as f64);
    let ledger_ok = check_ledger(n, h.weight(), heavy.len(), rho).is_ok();

    let mut in_s = vec![false; n + 1];
    for e in &heavy {
        in_s[e.u] = true;
        in_s[e.v] = true;
    }
    let touched = in_s.iter().filter(|&&x| x).count();

    // unit edges present in h: unit[i] is {v_i, v_(i+1)}
    let unit: Vec<bool> = (0..n)
        .map(|i| h.contains(g.find_edge(i, i + 1).expect("path edge")))
        .collect();
    let reach = 1.0 / (32.0 * rho);
    let steps = reach.floor() as usize;
    let mut in_near = vec![false; n + 1];
    for v in (0..=n).filter(|&v| in_s[v]) {
        in_near[v] = true;
        let mut i = v;
        for _ in 0..steps {
            if i == 0 || !unit[i - 1] {
                break;
            }
            i -= 1;
            in_near[i] = true;
        }
        let mut i = v;
        for _ in 0..steps {
            if i == n || !unit[i] {
                break;
            }
            i += 1;
            in_near[i] = true;
        }
    }
    let near = in_near.iter().filter(|&&x| x).count();

    let min_far = (0..=n)
        .filter(|&u| !in_near[u])
        .map(|u| {
            dijkstra(h, &[u], f64::INFINITY)
                .dist
                .iter()
                .filter(|&&d| d > reach)
                .count()
        })
        .min()
        .unwrap_or(n + 1);

    let dist1 = lq_distortion(&measure(g, h)?, 1.0);
    let threshold = 1.0 / (128.0 * rho);
    let touched_ok = touched <= 2 * heavy.len();
    let near_ok = near as f64 <= 3.0 * n as f64 / 8.0;
    let far_ok = min_far as f64 >= n as f64 - 2.0 * reach - 1.0;
    Ok(LowerBoundVerdict {
        n,
        rho,
        lightness: light,
        dist1,
        threshold,
        heavy_edges: heavy.len(),
        budget,
        touched,
        near,
        min_far,
        ledger_ok,
        touched_ok,
        near_ok,
        far_ok,
        pass: dist1 >= threshold && ledger_ok && touched_ok && near_ok && far_ok,
    })
}

/// Seeded instance families.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    /// `rows x cols` grid with unit weights.
    Grid { rows: usize, cols: usize },
    /// Uniform points in the unit square joined within `radius`, weights
    /// Euclidean; the Euclidean MST is always included so the graph is connected.
    RandomGeometric { n: usize, radius: f64 },
    /// Erdős–Rényi `G(n, p)` with weights uniform in `[1, 10)`, plus a random
    /// spanning tree for connectivity.
    ErWeighted { n: usize, p: f64 },
    Cycle { n: usize },
    Path { n: usize },
    LowerBound { n: usize },
}

pub fn generate(kind: &GraphKind, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        GraphKind::Grid { rows, cols } => {
            if rows == 0 || cols == 0 || rows * cols < 2 {
                return Err(Error::InvalidParams("grid needs at least 2 cells".into()));
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut e = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        e.push((id(r, c), id(r, c + 1), 1.0));
                    }
                    if r + 1 < rows {
                        e.push((id(r, c), id(r + 1, c), 1.0));
                    }
                }
            }
            Graph::new(rows * cols, &e)
        }
        GraphKind::RandomGeometric { n, radius } => {
            if n < 2 || !(radius > 0.0) {
                return Err(Error::InvalidParams("random-geometric needs n >= 2 and radius > 0".into()));
            }
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
            let dist = |a: usize, b: usize| {
                let (dx, dy) = (pts[a].0 - pts[b].0, pts[a].1 - pts[b].1);
                (dx * dx + dy * dy).sqrt()
            };
            let mut all: Vec<(VertexId, VertexId, f64)> = Vec::with_capacity(n * (n - 1) / 2);
            for a in 0..n {
                for b in (a + 1)..n {
                    all.push((a, b, dist(a, b)));
                }
            }
            all.sort_by(|x, y| x.2.total_cmp(&y.2).then((x.0, x.1).cmp(&(y.0, y.1))));
            let mut sets = DisjointSets::new(n);
            let mut e = Vec::new();
            for &(a, b, w) in &all {
                if sets.union(a, b) || w <= radius {
                    e.push((a, b, w));
                }
            }
            Graph::new(n, &e)
        }
        GraphKind::ErWeighted { n, p } => {
            if n < 2 || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams("er-weighted needs n >= 2 and p in [0, 1]".into()));
            }
            let mut e = Vec::new();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            for i in 1..n {
                let j = rng.gen_range(0..i);
                e.push((perm[i], perm[j], rng.gen_range(1.0..10.0)));
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    if rng.gen_bool(p) {
                        e.push((a, b, rng.gen_range(1.0..10.0)));
                    }
                }
            }
            Graph::new(n, &e)
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParams("cycle needs n >= 3".into()));
            }
            let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
            Graph::new(n, &e)
        }
        GraphKind::Path { n } => {
            if n < 2 {
                return Err(Error::InvalidParams("path needs n >= 2".into()));
            }
            let e: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
            Graph::new(n, &e)
        }
        GraphKind::LowerBound { n } => lower_bound_graph(n),
    }
}

/// Radius giving average degree about `2 ln n` in the unit square.
pub fn default_radius(n: usize) -> f64 {
    (2.0 * (n as f64).ln() / (std::f64::consts::PI * n as f64)).sqrt()
}
