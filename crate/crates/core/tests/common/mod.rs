//! Independent oracles and instance builders shared by the integration tests.
#![allow(dead_code)]

use lightspan::benchgen::{default_radius, generate, GraphKind};
use lightspan::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative slack for comparisons on float-weighted instances.
pub const REL: f64 = 1e-9;

pub fn le(a: f64, b: f64) -> bool {
    a <= b || a - b <= REL * a.abs().max(b.abs())
}

/// The four corpus families at roughly `n` vertices.
pub fn corpus(n: usize) -> Vec<(&'static str, Graph)> {
    let grid = match n {
        256 => GraphKind::Grid { rows: 16, cols: 16 },
        128 => GraphKind::Grid { rows: 8, cols: 16 },
        _ => panic!("no grid shape for n = {n}"),
    };
    vec![
        ("grid", generate(&grid, 0).unwrap()),
        (
            "random-geometric",
            generate(
                &GraphKind::RandomGeometric {
                    n,
                    radius: default_radius(n),
                },
                7,
            )
            .unwrap(),
        ),
        ("cycle", generate(&GraphKind::Cycle { n }, 0).unwrap()),
        ("lower-bound", generate(&GraphKind::LowerBound { n }, 0).unwrap()),
    ]
}

/// `k` distinct vertices out of `0..n`, seeded.
pub fn random_terminals(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(&mut rng);
    all.truncate(k);
    all
}

/// Random connected graph with integer weights in `1..=max_w`: a random
/// attachment tree plus each remaining pair with probability `p`. No
/// parallel edges, so edge ids equal positions in the returned list.
pub fn random_int_graph(n: usize, p: f64, max_w: u32, seed: u64) -> Vec<(usize, usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut present = vec![false; n * n];
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
        present[a * n + b] = true;
        edges.push((a, b, rng.gen_range(1..=max_w) as f64));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if !present[a * n + b] && rng.gen_bool(p) {
                edges.push((a, b, rng.gen_range(1..=max_w) as f64));
            }
        }
    }
    edges.shuffle(&mut rng);
    edges
}

/// Cubic all-pairs shortest paths, row-major.
pub fn floyd_warshall(n: usize, edges: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n * n];
    for v in 0..n {
        d[v * n + v] = 0.0;
    }
    for &(u, v, w) in edges {
        if w < d[u * n + v] {
            d[u * n + v] = w;
            d[v * n + u] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    d
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

/// Minimum spanning tree by enumerating every `(n-1)`-subset of edges.
/// Ties are broken by the smallest id sum, which is the unique minimum under
/// the `(weight, id)` order. Returns sorted edge ids.
pub fn exhaustive_mst(n: usize, edges: &[(usize, usize, f64)]) -> Vec<usize> {
    let m = edges.len();
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    let mut pick = Vec::with_capacity(n - 1);
    fn rec(
        start: usize,
        n: usize,
        m: usize,
        edges: &[(usize, usize, f64)],
        pick: &mut Vec<usize>,
        best: &mut Option<(f64, usize, Vec<usize>)>,
    ) {
        if pick.len() == n - 1 {
            let mut parent: Vec<usize> = (0..n).collect();
            for &e in pick.iter() {
                let (a, b) = (find(&mut parent, edges[e].0), find(&mut parent, edges[e].1));
                if a == b {
                    return;
                }
                parent[a] = b;
            }
            let w: f64 = pick.iter().map(|&e| edges[e].2).sum();
            let s: usize = pick.iter().sum();
            let better = match best {
                None => true,
                Some((bw, bs, _)) => w < *bw || (w == *bw && s < *bs),
            };
            if better {
                *best = Some((w, s, pick.clone()));
            }
            return;
        }
        for e in start..m {
            if m - e < n - 1 - pick.len() {
                break;
            }
            pick.push(e);
            rec(e + 1, n, m, edges, pick, best);
            pick.pop();
        }
    }
    if n == 1 {
        return Vec::new();
    }
    rec(0, n, m, edges, &mut pick, &mut best);
    best.expect("connected input").2
}

/// Exact `ceil(p n / q)`.
pub fn ceil_frac(p: usize, n: usize, q: usize) -> usize {
    (p * n).div_ceil(q)
}

/// `R(v, p/q)` from a distance row: the `ceil(p n / q)`-th smallest entry.
pub fn radius_oracle(row: &[f64], p: usize, q: usize) -> f64 {
    let mut r = row.to_vec();
    r.sort_by(f64::total_cmp);
    let k = ceil_frac(p, row.len(), q).clamp(1, row.len());
    r[k - 1]
}

/// `ceil(log2 k)` with `ceil(log2 1) = 0`.
pub fn ceil_log2(k: usize) -> u32 {
    k.next_power_of_two().trailing_zeros()
}

/// Distortions sorted descending.
pub fn sorted_desc(xs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = xs.collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Scaling profile at `eps = 2^-m`: all but `floor(N / 2^m)` pairs are at
/// most this value.
pub fn order_stat(desc: &[f64], m: u32) -> f64 {
    let n = desc.len();
    let skip = n.checked_shr(m).unwrap_or(0);
    desc[skip.min(n - 1)]
}

/// `(mean d^q)^(1/q)` and `(2 * integral_{1/(2N)}^1 gamma(x)^q dx)^(1/q)` for
/// the step profile `gamma(x) = desc[floor(x N)]`.
pub fn lemma21_oracle(desc: &[f64], q: f64) -> (f64, f64) {
    let n = desc.len() as f64;
    let lhs = (desc.iter().map(|d| d.powf(q)).sum::<f64>() / n).powf(1.0 / q);
    let head = desc[0].powf(q) / (2.0 * n);
    let tail: f64 = desc[1..].iter().map(|d| d.powf(q) / n).sum();
    let rhs = (2.0 * (head + tail)).powf(1.0 / q);
    (lhs, rhs)
}
