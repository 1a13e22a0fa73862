//! Text formats: edge lists, vertex lists (rankings, terminal sets),
//! distance matrices, and profile CSV.
//!
//! Everything is whitespace separated; `#` starts a comment running to the
//! end of the line. Writers emit shortest round-trip decimals so output is
//! byte-stable.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph, VertexId};
use crate::metric::MetricSpace;
use crate::metrics::ScalingBound;

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what} {tok:?}"),
    })
}

fn no_trailing<'a>(mut it: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match it.next() {
        Some(tok) => Err(Error::Parse {
            line,
            msg: format!("unexpected token {tok:?}"),
        }),
        None => Ok(()),
    }
}

/// Raw `n` and `(u, v, w)` triples of an edge-list file.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(VertexId, VertexId, f64)>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `n m` header".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hl, "vertex count")?;
    let m: usize = field(toks.next(), hl, "edge count")?;
    no_trailing(toks, hl)?;
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (ln, body) in lines {
        let mut toks = body.split_whitespace();
        let u = field(toks.next(), ln, "endpoint")?;
        let v = field(toks.next(), ln, "endpoint")?;
        let w = field(toks.next(), ln, "weight")?;
        no_trailing(toks, ln)?;
        edges.push((u, v, w));
        last = ln;
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok((n, edges))
}

pub fn read_graph(text: &str) -> Result<Graph> {
    let (n, edges) = parse_edge_list(text)?;
    Graph::new(n, &edges)
}

pub fn write_edges<'a, I>(n: usize, edges: I) -> String
where
    I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    I::IntoIter: ExactSizeIterator + 'a,
{
    let edges = edges.into_iter();
    let mut out = format!("{n} {}\n", edges.len());
    for (u, v, w) in edges {
        writeln!(out, "{u} {v} {w}").expect("write to string");
    }
    out
}

pub fn write_graph(g: &Graph) -> String {
    write_edges(g.n(), g.edges().iter().map(|e| (e.u, e.v, e.weight)))
}

pub fn write_subgraph(h: &Subgraph<'_>) -> String {
    let edges: Vec<_> = h.edges().map(|e| (e.u, e.v, e.weight)).collect();
    write_edges(h.n(), edges)
}

/// One vertex id per line (rankings list `v_1` first; terminal sets in any
/// order).
pub fn parse_vertex_list(text: &str) -> Result<Vec<VertexId>> {
    content_lines(text)
        .map(|(ln, body)| {
            let mut toks = body.split_whitespace();
            let v = field(toks.next(), ln, "vertex id")?;
            no_trailing(toks, ln)?;
            Ok(v)
        })
        .collect()
}

pub fn write_vertex_list(vs: &[VertexId]) -> String {
    let mut out = String::new();
    for v in vs {
        writeln!(out, "{v}").expect("write to string");
    }
    out
}

/// `n`, then `n` rows of `n` distances.
pub fn parse_matrix(text: &str) -> Result<MetricSpace> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing size".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hl, "size")?;
    no_trailing(toks, hl)?;
    let mut d = Vec::with_capacity(n * n);
    for row in 0..n {
        let (ln, body) = lines.next().ok_or(Error::Parse {
            line: hl + row + 1,
            msg: format!("expected {n} rows, found {row}"),
        })?;
        let mut toks = body.split_whitespace();
        for _ in 0..n {
            d.push(field(toks.next(), ln, "distance")?);
        }
        no_trailing(toks, ln)?;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            msg: "trailing rows".into(),
        });
    }
    MetricSpace::from_matrix(n, d)
}

pub fn write_matrix(m: &MetricSpace) -> String {
    let n = m.n();
    let mut out = format!("{n}\n");
    for u in 0..n {
        let row: Vec<String> = m.row(u).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// `eps,gamma,gamma_coarse` rows over the given grid.
pub fn write_profile_csv<A: ScalingBound, B: ScalingBound>(grid: &[f64], gamma: &A, coarse: &B) -> String {
    let mut out = String::from("eps,gamma,gamma_coarse\n");
    for &eps in grid {
        writeln!(out, "{eps},{},{}", gamma.at(eps), coarse.at(eps)).expect("write to string");
    }
    out
}
