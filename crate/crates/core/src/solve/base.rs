//! Leaves of the search: few undecided vertices, or paths and cycles only.

use num_traits::Zero;

use crate::error::{usage, Result};
use crate::graph::{Edge, Graph, Vertex, Weight};
use crate::instance::{Instance, Label};

use super::Solution;

/// Solves an instance with at most six U-vertices by enumeration, or one of
/// maximum degree at most 2 by a dynamic program along each path and cycle.
///
/// With `optimize` the lightest solution is returned, otherwise any.
pub fn solve_base(inst: &Instance, optimize: bool) -> Result<Option<Solution>> {
    if inst.u_count() <= 6 {
        Ok(enumerate(inst, optimize))
    } else if inst.graph.max_degree() <= 2 {
        Ok(paths_and_cycles(inst, optimize))
    } else {
        usage("base case needs at most six U-vertices or maximum degree 2")
    }
}

fn enumerate(inst: &Instance, optimize: bool) -> Option<Solution> {
    let g = &inst.graph;
    let us = inst.u_vertices();
    let mut state: Vec<Label> = (0..g.capacity()).map(|v| inst.label(v)).collect();
    // vertices whose constraint can change with the assignment
    let mut touched = vec![false; g.capacity()];
    for &u in &us {
        touched[u] = true;
        for &y in g.neighbors(u) {
            touched[y] = true;
        }
    }
    if !g
        .vertices()
        .filter(|&v| !touched[v])
        .all(|v| locally_ok(g, &state, v))
    {
        return None;
    }
    let near: Vec<Vertex> = g.vertices().filter(|&v| touched[v]).collect();
    let mut best: Option<Solution> = None;
    for mask in 0u32..(1 << us.len()) {
        for (i, &u) in us.iter().enumerate() {
            state[u] = if mask >> i & 1 == 1 {
                Label::M
            } else {
                Label::I
            };
        }
        if !near.iter().all(|&v| locally_ok(g, &state, v)) {
            continue;
        }
        let sol = matching_of(g, &state);
        if !optimize {
            return Some(sol);
        }
        if best
            .as_ref()
            .is_none_or(|b| sol.total_weight < b.total_weight)
        {
            best = Some(sol);
        }
    }
    best
}

/// The partition constraint at one vertex of a fully labeled graph.
fn locally_ok(g: &Graph, state: &[Label], v: Vertex) -> bool {
    match state[v] {
        Label::I => g.neighbors(v).iter().all(|&y| state[y] != Label::I),
        Label::M => {
            g.neighbors(v)
                .iter()
                .filter(|&&y| state[y] == Label::M)
                .count()
                == 1
        }
        Label::U => false,
    }
}

fn matching_of(g: &Graph, state: &[Label]) -> Solution {
    let mut sol = Solution::default();
    for e in g.edges() {
        if state[e.lo()] == Label::M && state[e.hi()] == Label::M {
            sol.total_weight += g.weight(e.lo(), e.hi());
            sol.edges.insert(e);
        }
    }
    sol
}

/// Position states along a path or cycle: independent, matched with the
/// next vertex, matched with the previous vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pos {
    Free,
    Ahead,
    Behind,
}

const POSITIONS: [Pos; 3] = [Pos::Free, Pos::Ahead, Pos::Behind];

fn follows(prev: Pos, next: Pos) -> bool {
    matches!(
        (prev, next),
        (Pos::Free, Pos::Ahead) | (Pos::Ahead, Pos::Behind) | (Pos::Behind, Pos::Free)
    )
}

fn permitted(label: Label, p: Pos) -> bool {
    match label {
        Label::U => true,
        Label::I => p == Pos::Free,
        Label::M => p != Pos::Free,
    }
}

fn paths_and_cycles(inst: &Instance, optimize: bool) -> Option<Solution> {
    let g = &inst.graph;
    let mut all = Solution::default();
    for comp in g.all_components() {
        let order = walk(g, &comp);
        let closed = order.len() >= 3 && comp.iter().all(|&v| g.degree(v) == 2);
        let sol = if closed {
            let mut best: Option<Solution> = None;
            for start in POSITIONS {
                if let Some(s) = best_sequence(inst, &order, Some(start), optimize) {
                    if !optimize {
                        best = Some(s);
                        break;
                    }
                    if best
                        .as_ref()
                        .is_none_or(|b| s.total_weight < b.total_weight)
                    {
                        best = Some(s);
                    }
                }
            }
            best
        } else {
            best_sequence(inst, &order, None, optimize)
        };
        let sol = sol?;
        all.total_weight += sol.total_weight;
        all.edges.extend(sol.edges);
    }
    Some(all)
}

/// Vertices of a path or cycle component in walking order.
fn walk(g: &Graph, comp: &[Vertex]) -> Vec<Vertex> {
    let start = comp
        .iter()
        .copied()
        .find(|&v| g.degree(v) <= 1)
        .unwrap_or(comp[0]);
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = g.neighbors(cur).iter().find(|&&y| y != prev && y != start) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    order
}

/// Viterbi pass over `order`. With `cycle_start` set the sequence is closed
/// and its first position is pinned.
fn best_sequence(
    inst: &Instance,
    order: &[Vertex],
    cycle_start: Option<Pos>,
    optimize: bool,
) -> Option<Solution> {
    let g = &inst.graph;
    let k = order.len();
    let mut cost: Vec<[Option<Weight>; 3]> = vec![[None; 3]; k];
    let mut from: Vec<[usize; 3]> = vec![[0; 3]; k];
    for (s, &p) in POSITIONS.iter().enumerate() {
        let start_ok = match cycle_start {
            Some(c) => c == p,
            None => p != Pos::Behind,
        };
        if start_ok && permitted(inst.label(order[0]), p) {
            cost[0][s] = Some(Weight::zero());
        }
    }
    for i in 1..k {
        for (t, &q) in POSITIONS.iter().enumerate() {
            if !permitted(inst.label(order[i]), q) {
                continue;
            }
            for (s, &p) in POSITIONS.iter().enumerate() {
                let Some(c) = cost[i - 1][s] else { continue };
                if !follows(p, q) {
                    continue;
                }
                let step = if q == Pos::Behind {
                    g.weight(order[i - 1], order[i])
                } else {
                    Weight::zero()
                };
                let total = c + step;
                if cost[i][t].is_none_or(|old| total < old) {
                    cost[i][t] = Some(total);
                    from[i][t] = s;
                }
            }
        }
    }
    let mut end: Option<(usize, Weight)> = None;
    for (s, &p) in POSITIONS.iter().enumerate() {
        let Some(mut c) = cost[k - 1][s] else {
            continue;
        };
        match cycle_start {
            Some(first) => {
                if !follows(p, first) {
                    continue;
                }
                if first == Pos::Behind {
                    c += g.weight(order[k - 1], order[0]);
                }
            }
            None => {
                if p == Pos::Ahead {
                    continue;
                }
            }
        }
        if end.is_none_or(|(_, best)| c < best) {
            end = Some((s, c));
            if !optimize {
                break;
            }
        }
    }
    let (mut s, total_weight) = end?;
    let mut edges = std::collections::BTreeSet::new();
    for i in (0..k).rev() {
        if POSITIONS[s] == Pos::Behind {
            let prev = if i == 0 { order[k - 1] } else { order[i - 1] };
            edges.insert(Edge::new(prev, order[i]));
        }
        s = from[i][s];
    }
    Some(Solution {
        edges,
        total_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c5_has_none() {
        let inst = Instance::new(Graph::cycle(5));
        assert!(solve_base(&inst, false).unwrap().is_none());
    }

    #[test]
    fn p3_matches_an_end_edge() {
        let inst = Instance::new(Graph::path(3));
        let s = solve_base(&inst, false).unwrap().unwrap();
        assert_eq!(s.edges.len(), 1);
        assert!(s.edges.iter().next().unwrap().contains(1));
    }

    #[test]
    fn long_cycle_by_dp() {
        let inst = Instance::new(Graph::cycle(99));
        let s = solve_base(&inst, false).unwrap().unwrap();
        assert_eq!(s.edges.len(), 33);
        assert!(solve_base(&Instance::new(Graph::cycle(100)), false)
            .unwrap()
            .is_none());
    }

    #[test]
    fn dp_respects_labels() {
        let inst = Instance::with_labels(Graph::path(7), &[], &[0]).unwrap();
        let s = solve_base(&inst, false).unwrap().unwrap();
        assert!(s.edges.iter().all(|e| !e.contains(0)));
        let inst = Instance::with_labels(Graph::path(8), &[], &[0]).unwrap();
        assert!(solve_base(&inst, false).unwrap().is_none());
    }

    #[test]
    fn rejects_large_dense_instances() {
        let inst = Instance::new(Graph::complete(8));
        assert!(solve_base(&inst, false).is_err());
    }
}
