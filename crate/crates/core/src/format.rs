//! Text formats for graphs and certificates.
//!
//! Graphs: `c` comment lines, one header `p dim <n> <m>`, then `m` lines
//! `e <u> <v> [weight]` with 1-indexed endpoints. Weights are integers or
//! `num/den` and must be given on every edge or on none.
//!
//! Certificates: lines `m <u> <v>` and an optional `w <total>`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex, Weight};
use crate::instance::{Instance, Label};
use crate::solve::Solution;

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn parse_weight(s: &str) -> Option<Weight> {
    s.parse::<Weight>().ok()
}

/// 1-indexed vertex token to a 0-indexed id below `n`.
fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<Vertex> {
    match tok.parse::<usize>() {
        Ok(v) if v >= 1 && v <= n => Ok(v - 1),
        _ => parse_err(line, format!("vertex {tok:?} is not in 1..={n}")),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(Vertex, Vertex, Option<Weight>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", ..] => {}
            ["p", "dim", n, m] => {
                if header.is_some() {
                    return parse_err(line, "second header line");
                }
                let (Ok(n), Ok(m)) = (n.parse(), m.parse()) else {
                    return parse_err(line, "header counts must be non-negative integers");
                };
                header = Some((n, m));
            }
            ["p", ..] => return parse_err(line, "header must read `p dim <n> <m>`"),
            ["e", rest @ ..] if rest.len() == 2 || rest.len() == 3 => {
                let Some((n, _)) = header else {
                    return parse_err(line, "edge before header");
                };
                let u = parse_vertex(rest[0], n, line)?;
                let v = parse_vertex(rest[1], n, line)?;
                let w = match rest.get(2) {
                    Some(t) => match parse_weight(t) {
                        Some(w) => Some(w),
                        None => return parse_err(line, format!("bad weight {t:?}")),
                    },
                    None => None,
                };
                if edges.first().is_some_and(|e| e.2.is_some() != w.is_some()) {
                    return parse_err(line, "weights must be given on all edges or on none");
                }
                edges.push((u, v, w));
            }
            ["e", ..] => return parse_err(line, "edge line must read `e <u> <v> [weight]`"),
            _ => return parse_err(line, format!("unrecognized line {raw:?}")),
        }
    }
    let Some((n, m)) = header else {
        return parse_err(0, "missing `p dim <n> <m>` header");
    };
    if edges.len() != m {
        return parse_err(
            0,
            format!("header announces {m} edges, found {}", edges.len()),
        );
    }
    let weighted = edges.first().is_some_and(|e| e.2.is_some());
    let mut g = if weighted {
        Graph::new_weighted(n)
    } else {
        Graph::new(n)
    };
    for (k, (u, v, w)) in edges.into_iter().enumerate() {
        let added = match w {
            Some(w) => g.add_weighted_edge(u, v, w),
            None => g.add_edge(u, v),
        };
        if let Err(e) = added {
            return Err(Error::Input(format!("edge #{}: {e}", k + 1)));
        }
    }
    Ok(g)
}

/// Serializes a graph, compacting ids if some vertices were deleted.
pub fn write_graph(g: &Graph, comments: &[String]) -> String {
    let (g, _) = g.compacted();
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p dim {} {}", g.num_vertices(), g.num_edges());
    for e in g.edges() {
        if g.is_weighted() {
            let _ = writeln!(
                out,
                "e {} {} {}",
                e.lo() + 1,
                e.hi() + 1,
                g.weight(e.lo(), e.hi())
            );
        } else {
            let _ = writeln!(out, "e {} {}", e.lo() + 1, e.hi() + 1);
        }
    }
    out
}

/// Serializes an instance with its labels as `c label <v> <M|I>` comments.
/// Ids are compacted; the comments use the compacted numbering.
pub fn write_instance(inst: &Instance) -> String {
    let (_, old) = inst.graph().compacted();
    let comments: Vec<String> = old
        .iter()
        .enumerate()
        .filter(|&(_, &v)| inst.label(v) != Label::U)
        .map(|(i, &v)| format!("label {} {}", i + 1, inst.label(v)))
        .collect();
    write_graph(inst.graph(), &comments)
}

/// Parsed certificate with 0-indexed endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub edges: BTreeSet<Edge>,
    pub total: Option<Weight>,
}

/// Reads `m <u> <v>` and `w <total>` lines; comment lines and a bare `YES`
/// line (as printed by `dim solve`) are skipped.
pub fn parse_certificate(text: &str, n: usize) -> Result<Certificate> {
    let mut cert = Certificate::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] | ["c", ..] | ["YES"] => {}
            ["m", u, v] => {
                let u = parse_vertex(u, n, line)?;
                let v = parse_vertex(v, n, line)?;
                if u == v {
                    return parse_err(line, "matched edge is a self-loop");
                }
                if !cert.edges.insert(Edge::new(u, v)) {
                    return parse_err(line, "matched edge listed twice");
                }
            }
            ["w", t] => {
                if cert.total.is_some() {
                    return parse_err(line, "second total line");
                }
                match parse_weight(t) {
                    Some(w) => cert.total = Some(w),
                    None => return parse_err(line, format!("bad total {t:?}")),
                }
            }
            _ => return parse_err(line, format!("unrecognized certificate line {raw:?}")),
        }
    }
    Ok(cert)
}

/// Certificate lines for a solution, with a total line when `weighted`.
pub fn write_certificate(sol: &Solution, weighted: bool) -> String {
    let mut out = String::new();
    for e in &sol.edges {
        let _ = writeln!(out, "m {} {}", e.lo() + 1, e.hi() + 1);
    }
    if weighted {
        let _ = writeln!(out, "w {}", sol.total_weight);
    }
    out
}
