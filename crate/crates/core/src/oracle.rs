//! Brute-force ground truth and certificate checking.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{internal, usage, Error, Result};
use crate::graph::{Edge, Graph, Vertex, Weight};
use crate::instance::{Instance, Label};
use crate::solve::{Mode, Solution};

/// Largest vertex count the enumeration accepts.
pub const MAX_BRUTE_FORCE: usize = 24;

/// Enumerates all `2^n` splits into an independent side and a 1-regular
/// side. Decide mode returns the first hit and ignores weights.
pub fn brute_force(g: &Graph, mode: Mode) -> Result<Option<Solution>> {
    let vs: Vec<Vertex> = g.vertices().collect();
    if vs.len() > MAX_BRUTE_FORCE {
        return usage(format!(
            "brute force is limited to {MAX_BRUTE_FORCE} vertices, got {}",
            vs.len()
        ));
    }
    let free: Vec<bool> = vec![true; vs.len()];
    Ok(search(g, &vs, &free, 0, mode))
}

/// Brute force over the undecided vertices of an instance, honoring its
/// labels and current weights.
pub fn brute_force_labeled(inst: &Instance, mode: Mode) -> Result<Option<Solution>> {
    let g = inst.graph();
    let vs: Vec<Vertex> = g.vertices().collect();
    let free: Vec<bool> = vs.iter().map(|&v| inst.label(v) == Label::U).collect();
    let n_free = free.iter().filter(|&&f| f).count();
    if n_free > MAX_BRUTE_FORCE || vs.len() > 64 {
        return usage("instance too large for brute force");
    }
    // fixed I-vertices are bits of the base mask
    let base = vs
        .iter()
        .enumerate()
        .filter(|&(_, &v)| inst.label(v) == Label::I)
        .fold(0u64, |m, (i, _)| m | 1 << i);
    Ok(search(g, &vs, &free, base, mode))
}

/// Bitmask enumeration; bit `i` set means `vs[i]` is on the independent side.
fn search(g: &Graph, vs: &[Vertex], free: &[bool], base: u64, mode: Mode) -> Option<Solution> {
    let n = vs.len();
    let mut index = vec![usize::MAX; g.capacity()];
    for (i, &v) in vs.iter().enumerate() {
        index[v] = i;
    }
    let adj: Vec<u64> = vs
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u64, |m, &y| m | 1 << index[y]))
        .collect();
    let free_bits: Vec<usize> = (0..n).filter(|&i| free[i]).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Option<(Weight, u64)> = None;
    for sub in 0u64..(1 << free_bits.len()) {
        let mut indep = base;
        for (j, &i) in free_bits.iter().enumerate() {
            if sub >> j & 1 == 1 {
                indep |= 1 << i;
            }
        }
        let matched = all & !indep;
        let ok = (0..n).all(|i| {
            if indep >> i & 1 == 1 {
                adj[i] & indep == 0
            } else {
                (adj[i] & matched).count_ones() == 1
            }
        });
        if !ok {
            continue;
        }
        if mode == Mode::Decide {
            return Some(solution_of(g, vs, &adj, matched));
        }
        let mut w = Weight::zero();
        for i in 0..n {
            if matched >> i & 1 == 1 {
                let j = (adj[i] & matched).trailing_zeros() as usize;
                if i < j {
                    w += g.weight(vs[i], vs[j]);
                }
            }
        }
        let better = match &best {
            None => true,
            Some((b, _)) => match mode {
                Mode::Maximize => w > *b,
                _ => w < *b,
            },
        };
        if better {
            best = Some((w, matched));
        }
    }
    best.map(|(_, matched)| solution_of(g, vs, &adj, matched))
}

fn solution_of(g: &Graph, vs: &[Vertex], adj: &[u64], matched: u64) -> Solution {
    let mut sol = Solution::default();
    for i in 0..vs.len() {
        if matched >> i & 1 == 1 {
            let j = (adj[i] & matched).trailing_zeros() as usize;
            if i < j {
                sol.edges.insert(Edge::new(vs[i], vs[j]));
                sol.total_weight += g.weight(vs[i], vs[j]);
            }
        }
    }
    sol
}

/// Outcome of checking a proposed edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Accept,
    Reject(String),
}

impl Check {
    pub fn accepted(&self) -> bool {
        *self == Check::Accept
    }
}

/// Checks `edges` both as an edge-domination condition and as a vertex
/// partition, and insists the two readings agree.
pub fn verify_detailed(g: &Graph, edges: &BTreeSet<Edge>) -> Result<Check> {
    for e in edges {
        if !g.has_edge(e.lo(), e.hi()) {
            return Err(Error::Input(format!("edge {e} is not in the graph")));
        }
    }
    let by_edges = edge_form(g, edges);
    let by_partition = partition_form(g, edges);
    if by_edges.accepted() != by_partition.accepted() {
        return internal(format!(
            "certificate checks disagree: edge form {by_edges:?}, partition form {by_partition:?}"
        ));
    }
    Ok(by_edges)
}

/// Whether `edges` is a dominating induced matching of `g`.
pub fn verify(g: &Graph, edges: &BTreeSet<Edge>) -> Result<bool> {
    Ok(verify_detailed(g, edges)?.accepted())
}

/// Matching, induced, and every other edge touching exactly one matched edge.
fn edge_form(g: &Graph, edges: &BTreeSet<Edge>) -> Check {
    let mut owner: Vec<Option<Edge>> = vec![None; g.capacity()];
    for &e in edges {
        for v in [e.lo(), e.hi()] {
            if let Some(f) = owner[v].replace(e) {
                return Check::Reject(format!("edges {f} and {e} share vertex {v}"));
            }
        }
    }
    for e in g.edges() {
        if edges.contains(&e) {
            continue;
        }
        match (owner[e.lo()], owner[e.hi()]) {
            (Some(a), Some(b)) => {
                return Check::Reject(format!("edge {e} joins matched edges {a} and {b}"));
            }
            (None, None) => return Check::Reject(format!("edge {e} is not dominated")),
            _ => {}
        }
    }
    Check::Accept
}

/// Covered vertices induce a 1-regular graph; the rest are independent.
fn partition_form(g: &Graph, edges: &BTreeSet<Edge>) -> Check {
    let mut covered = vec![false; g.capacity()];
    for e in edges {
        covered[e.lo()] = true;
        covered[e.hi()] = true;
    }
    for v in g.vertices() {
        let inside = g.neighbors(v).iter().filter(|&&y| covered[y]).count();
        if covered[v] && inside != 1 {
            return Check::Reject(format!("matched vertex {v} has {inside} matched neighbors"));
        }
        if !covered[v] && g.neighbors(v).iter().any(|&y| !covered[y]) {
            return Check::Reject(format!("unmatched vertex {v} has an unmatched neighbor"));
        }
    }
    Check::Accept
}
