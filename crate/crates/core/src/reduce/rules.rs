//! Graph-rewriting rules for pseudo-feasible instances with `I = M1 = ∅`.

use num_traits::Zero;

use crate::error::{internal, Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::instance::{Instance, Label};

use super::{RewriteRecord, Rule, RuleCounts};

/// A matched rule occurrence, ready to apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    /// Degree-2 M0-vertex whose two neighbors are adjacent.
    TriangleEdge { center: Vertex, edge: Edge },
    /// Degree-2 M0-vertex on a 5-cycle; `edge` is the side opposite it.
    FiveCycleEdge { center: Vertex, edge: Edge },
    /// `cycle[0..3]` have degree 2, `cycle[1]` and `cycle[4]` are M0.
    SixCycle { cycle: [Vertex; 6] },
    /// `path[0]` and `path[3]` are M0, the middle two have degree 2.
    Chain { path: [Vertex; 4] },
    /// `N[center]` is left only through the edge `exit_from`–`exit`.
    Tail {
        center: Vertex,
        exit_from: Vertex,
        exit: Vertex,
    },
    /// `N[center]` is a whole component.
    Small { center: Vertex },
}

impl Site {
    pub fn rule(&self) -> Rule {
        match self {
            Site::TriangleEdge { .. } => Rule::TriangleEdge,
            Site::FiveCycleEdge { .. } => Rule::FiveCycleEdge,
            Site::SixCycle { .. } => Rule::SixCycle,
            Site::Chain { .. } => Rule::Chain,
            Site::Tail { .. } => Rule::Tail,
            Site::Small { .. } => Rule::Small,
        }
    }
}

/// Rewriting rules in application order.
pub const STRUCTURAL_RULES: [Rule; 6] = [
    Rule::TriangleEdge,
    Rule::FiveCycleEdge,
    Rule::SixCycle,
    Rule::Chain,
    Rule::Tail,
    Rule::Small,
];

/// First occurrence (by anchor id) of one rewriting rule.
pub fn find_site(inst: &Instance, rule: Rule) -> Result<Option<Site>> {
    let m0 = inst.m0_vertices();
    let g = &inst.graph;
    let site = match rule {
        Rule::TriangleEdge => m0.iter().find_map(|&u| {
            let n = g.neighbors(u);
            (n.len() == 2 && g.has_edge(n[0], n[1])).then(|| Site::TriangleEdge {
                center: u,
                edge: Edge::new(n[0], n[1]),
            })
        }),
        Rule::FiveCycleEdge => m0.iter().find_map(|&u| {
            if g.degree(u) != 2 {
                return None;
            }
            let c = g.find_small_cycle(u, 5, |_| true)?;
            Some(Site::FiveCycleEdge {
                center: u,
                edge: Edge::new(c[2], c[3]),
            })
        }),
        Rule::SixCycle => m0.iter().find_map(|&v2| six_cycle_at(inst, v2)),
        Rule::Chain => {
            for &v1 in &m0 {
                if let Some(path) = chain_at(g, v1) {
                    check_chain(inst, path)?;
                    return Ok(Some(Site::Chain { path }));
                }
            }
            None
        }
        Rule::Tail => m0.iter().find_map(|&u| {
            let (count, exit) = exits(g, u);
            (count == 1).then(|| {
                let (exit_from, exit) = exit.unwrap();
                Site::Tail {
                    center: u,
                    exit_from,
                    exit,
                }
            })
        }),
        Rule::Small => m0
            .iter()
            .find(|&&u| exits(g, u).0 == 0)
            .map(|&u| Site::Small { center: u }),
        other => return internal(format!("{other:?} is not a rewriting rule")),
    };
    Ok(site)
}

fn six_cycle_at(inst: &Instance, v2: Vertex) -> Option<Site> {
    let g = &inst.graph;
    let n = g.neighbors(v2);
    if n.len() != 2 {
        return None;
    }
    let (v1, v3) = (n[0], n[1]);
    if g.degree(v1) != 2 || g.degree(v3) != 2 {
        return None;
    }
    let v6 = other_neighbor(g, v1, v2)?;
    let v4 = other_neighbor(g, v3, v2)?;
    if v4 == v6 || [v1, v2, v3].contains(&v4) || [v1, v2, v3].contains(&v6) {
        return None;
    }
    // v5 must be a common neighbor already in M0; an undecided v5 is left
    // for branching
    let v5 = g
        .neighbors(v4)
        .iter()
        .copied()
        .find(|&x| x != v3 && x != v6 && g.has_edge(x, v6) && inst.labels.is_m0(x))?;
    Some(Site::SixCycle {
        cycle: [v1, v2, v3, v4, v5, v6],
    })
}

fn other_neighbor(g: &Graph, v: Vertex, not: Vertex) -> Option<Vertex> {
    g.neighbors(v).iter().copied().find(|&x| x != not)
}

fn chain_at(g: &Graph, v1: Vertex) -> Option<[Vertex; 4]> {
    for &v2 in g.neighbors(v1) {
        if g.degree(v2) != 2 {
            continue;
        }
        let v3 = other_neighbor(g, v2, v1)?;
        if g.degree(v3) != 2 || v3 == v1 {
            continue;
        }
        let v4 = other_neighbor(g, v3, v2)?;
        if v4 == v2 {
            continue;
        }
        return Some([v1, v2, v3, v4]);
    }
    None
}

fn check_chain(inst: &Instance, [v1, _, _, v4]: [Vertex; 4]) -> Result<()> {
    let g = &inst.graph;
    if v4 == v1 {
        return Err(Error::Precondition(format!(
            "M0-vertex {v1} lies in a triangle"
        )));
    }
    if !inst.labels.is_m0(v4) {
        return Err(Error::Precondition(format!(
            "chain from {v1} ends at {v4}, which is not an M0-vertex"
        )));
    }
    if g.has_edge(v1, v4) {
        return Err(Error::Precondition(format!(
            "chain ends {v1} and {v4} are adjacent"
        )));
    }
    if g.neighbors(v1).iter().any(|x| g.has_edge(*x, v4)) {
        return Err(Error::Precondition(format!(
            "chain ends {v1} and {v4} share a neighbor"
        )));
    }
    Ok(())
}

/// Number of edges from `N(u)` to vertices outside `N[u]`, and one of them.
fn exits(g: &Graph, u: Vertex) -> (usize, Option<(Vertex, Vertex)>) {
    let mut count = 0;
    let mut first = None;
    for &v in g.neighbors(u) {
        for &y in g.neighbors(v) {
            if y != u && !g.has_edge(u, y) {
                count += 1;
                first.get_or_insert((v, y));
            }
        }
    }
    (count, first)
}

/// Lowest-weight edge from `u`, excluding one neighbor; ties by lowest id.
fn lightest_neighbor(g: &Graph, u: Vertex, skip: Option<Vertex>) -> Option<Vertex> {
    g.neighbors(u)
        .iter()
        .copied()
        .filter(|&x| Some(x) != skip)
        .min_by(|&a, &b| g.weight(u, a).cmp(&g.weight(u, b)).then(a.cmp(&b)))
}

/// Applies a site found by [`find_site`], recording what reconstruction needs.
pub fn apply_site(inst: &mut Instance, site: &Site) -> Result<()> {
    match *site {
        Site::TriangleEdge { edge, .. } | Site::FiveCycleEdge { edge, .. } => {
            inst.remove_edge(edge.lo(), edge.hi())?;
            inst.trace.push(RewriteRecord::EdgeDeletion { edge });
        }
        Site::SixCycle { cycle } => {
            let [v1, v2, v3, v4, v5, v6] = cycle;
            if !inst.labels.is_m0(v5) {
                return Err(Error::Precondition(format!(
                    "six-cycle vertex {v5} is not M0"
                )));
            }
            if inst.graph.is_weighted() {
                let w12 = inst.graph.weight(v1, v2);
                let w23 = inst.graph.weight(v2, v3);
                inst.graph.shift_weight(v4, v5, w12)?;
                inst.graph.shift_weight(v5, v6, w23)?;
            }
            let rest: Vec<Vertex> = inst
                .graph
                .neighbors(v5)
                .iter()
                .copied()
                .filter(|&x| x != v4 && x != v6)
                .collect();
            for x in rest {
                if !inst.labels.is_u(x) {
                    return Err(Error::Precondition(format!(
                        "neighbor {x} of M0-vertex {v5} is not undecided"
                    )));
                }
                inst.assign(x, Label::I)?;
            }
            inst.delete_vertices(&[v1, v2, v3])?;
            inst.trace.push(RewriteRecord::SixCycle { cycle });
        }
        Site::Chain { path } => {
            check_chain(inst, path)?;
            let [v1, v2, v3, v4] = path;
            let w12 = inst.graph.weight(v1, v2);
            let w34 = inst.graph.weight(v3, v4);
            let c = inst.contract_path(&path, w34, w12, Label::M)?;
            inst.trace.push(RewriteRecord::Chain {
                path,
                merged: c.vertex,
                from_first: c.from_first,
                from_last: c.from_last,
            });
        }
        Site::Tail {
            center: u,
            exit_from: v,
            exit: a,
        } => {
            let g = &inst.graph;
            let Some(v0) = lightest_neighbor(g, u, Some(v)) else {
                return Err(Error::Precondition(format!(
                    "tail center {u} has a single neighbor"
                )));
            };
            let offset = g.weight(u, v);
            let shift = g.weight(u, v0) - offset;
            let mut closed: Vec<Vertex> = g.neighbors(u).to_vec();
            closed.push(u);
            inst.delete_vertices(&closed)?;
            if !shift.is_zero() {
                let at_exit: Vec<Vertex> = inst.graph.neighbors(a).to_vec();
                for y in at_exit {
                    inst.graph.shift_weight(a, y, shift)?;
                }
            }
            inst.trace.push(RewriteRecord::Tail {
                center: u,
                exit_from: v,
                exit: a,
                alternative: v0,
                offset,
            });
        }
        Site::Small { center: u } => {
            let g = &inst.graph;
            let Some(v) = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&x| inst.labels.is_u(x))
                .min_by(|&a, &b| g.weight(u, a).cmp(&g.weight(u, b)).then(a.cmp(&b)))
            else {
                return Err(Error::Precondition(format!(
                    "M0-vertex {u} has no U-neighbor"
                )));
            };
            inst.assign(v, Label::M)?;
            inst.trace.push(RewriteRecord::Small {
                center: u,
                partner: v,
            });
        }
    }
    Ok(())
}

/// Finds and applies the first occurrence of one rule.
pub fn apply_rule(inst: &mut Instance, rule: Rule) -> Result<Option<Site>> {
    let Some(site) = find_site(inst, rule)? else {
        return Ok(None);
    };
    apply_site(inst, &site)?;
    Ok(Some(site))
}

/// Applies the first rewriting rule that matches, in fixed order.
///
/// Expects a pseudo-feasible instance with `I = M1 = ∅`. In debug builds
/// also checks that no rule increases the number of undecided vertices and
/// that every rule but tail removal keeps a connected graph with `M ≠ ∅`
/// that way.
pub fn apply_structural_rules(
    inst: &mut Instance,
    counts: &mut RuleCounts,
) -> Result<Option<Rule>> {
    let before = cfg!(debug_assertions).then(|| Snapshot::of(inst));
    for rule in STRUCTURAL_RULES {
        if let Some(site) = apply_rule(inst, rule)? {
            counts.bump(rule);
            if let Some(before) = before {
                before.check_step(inst, &site)?;
            }
            return Ok(Some(rule));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy)]
struct Snapshot {
    undecided: usize,
    connected_with_m: bool,
}

impl Snapshot {
    fn of(inst: &Instance) -> Self {
        Snapshot {
            undecided: inst.u_count(),
            connected_with_m: inst.graph.is_connected() && !inst.m_vertices().is_empty(),
        }
    }

    fn check_step(self, inst: &Instance, site: &Site) -> Result<()> {
        let after = inst.u_count();
        if after > self.undecided {
            return internal(format!(
                "{:?} raised the undecided count from {} to {after}",
                site.rule(),
                self.undecided
            ));
        }
        if self.connected_with_m
            && site.rule() != Rule::Tail
            && (!inst.graph.is_connected() || inst.m_vertices().is_empty())
        {
            return internal(format!("{site:?} disconnected the graph or emptied M"));
        }
        Ok(())
    }
}
