//! Pattern screens that recognize reducible vertices from local structure.
//!
//! Each screen is a sufficient condition; a miss says nothing.

use crate::error::{usage, Result};
use crate::graph::Vertex;
use crate::instance::Instance;

/// Local pattern that rules out one of the two labels for a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Obstruction {
    /// The vertex lies in a 4-clique.
    Clique4,
    /// At least two M-neighbors.
    TwoMNeighbors,
    /// Two U-triangles through the vertex with disjoint remaining pairs.
    DisjointUTriangles,
    /// Adjacent to an M0-vertex `u` with an adjacent U-pair in
    /// `N(v) ∪ N(u) \ {v}`.
    AdjacentUNearM0,
    /// The only U∪M-neighbor of some U-vertex.
    SoleSupport,
    /// 4-cycle `v u v' u'` with chord `vv'`.
    ChordedFourCycle,
    /// 4-cycle `v u v' u'` with `u` of degree 2.
    FourCycleDegreeTwo,
}

impl Obstruction {
    /// Whether the trial-propagation definition of reducibility is
    /// guaranteed to agree. The remaining screens rely on a global
    /// counting argument that the forced moves cannot see.
    pub fn propagation_derivable(&self) -> bool {
        !matches!(self, Obstruction::Clique4 | Obstruction::DisjointUTriangles)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Unknown,
    NotViable(Obstruction),
}

impl Verdict {
    pub fn is_known(&self) -> bool {
        matches!(self, Verdict::NotViable(_))
    }
}

/// Screen result for the two labels of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Screen {
    pub as_m: Verdict,
    pub as_i: Verdict,
}

/// Checks the local patterns for a live U-vertex.
pub fn structural_reducibility(inst: &Instance, v: Vertex) -> Result<Screen> {
    if !inst.graph.is_alive(v) || !inst.labels.is_u(v) {
        return usage(format!("vertex {v} is not a live U-vertex"));
    }
    if in_clique4(inst, v) {
        let hit = Verdict::NotViable(Obstruction::Clique4);
        return Ok(Screen {
            as_m: hit,
            as_i: hit,
        });
    }
    let as_m = if inst.labels.m_count(v) >= 2 {
        Verdict::NotViable(Obstruction::TwoMNeighbors)
    } else if adjacent_u_near_m0(inst, v) {
        Verdict::NotViable(Obstruction::AdjacentUNearM0)
    } else if disjoint_u_triangles(inst, v) {
        Verdict::NotViable(Obstruction::DisjointUTriangles)
    } else {
        Verdict::Unknown
    };
    let as_i = if sole_support(inst, v) {
        Verdict::NotViable(Obstruction::SoleSupport)
    } else if let Some(obstruction) = four_cycle(inst, v) {
        Verdict::NotViable(obstruction)
    } else {
        Verdict::Unknown
    };
    Ok(Screen { as_m, as_i })
}

fn in_clique4(inst: &Instance, v: Vertex) -> bool {
    let g = &inst.graph;
    let n = g.neighbors(v);
    for (i, &a) in n.iter().enumerate() {
        for (j, &b) in n.iter().enumerate().skip(i + 1) {
            if !g.has_edge(a, b) {
                continue;
            }
            if n[j + 1..]
                .iter()
                .any(|&c| g.has_edge(a, c) && g.has_edge(b, c))
            {
                return true;
            }
        }
    }
    false
}

fn adjacent_u_near_m0(inst: &Instance, v: Vertex) -> bool {
    let g = &inst.graph;
    for &u in g.neighbors(v) {
        if !inst.labels.is_m0(u) {
            continue;
        }
        let mut pool: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .chain(g.neighbors(u))
            .copied()
            .filter(|&x| x != v && inst.labels.is_u(x))
            .collect();
        pool.sort_unstable();
        pool.dedup();
        for (i, &a) in pool.iter().enumerate() {
            if pool[i + 1..].iter().any(|&b| g.has_edge(a, b)) {
                return true;
            }
        }
    }
    false
}

fn disjoint_u_triangles(inst: &Instance, v: Vertex) -> bool {
    let g = &inst.graph;
    let us: Vec<Vertex> = inst.u_neighbors(v).collect();
    let mut pairs = Vec::new();
    for (i, &a) in us.iter().enumerate() {
        for &b in &us[i + 1..] {
            if g.has_edge(a, b) {
                pairs.push((a, b));
            }
        }
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            if a != c && a != d && b != c && b != d {
                return true;
            }
        }
    }
    false
}

fn sole_support(inst: &Instance, v: Vertex) -> bool {
    inst.u_neighbors(v).any(|u| {
        inst.graph
            .neighbors(u)
            .iter()
            .all(|&y| y == v || inst.labels.is_i(y))
    })
}

fn four_cycle(inst: &Instance, v: Vertex) -> Option<Obstruction> {
    let g = &inst.graph;
    let nv = g.neighbors(v);
    let mut degree_two = false;
    // v' is any vertex with two common neighbors u, u' with v
    for &u in nv {
        for &vp in g.neighbors(u) {
            if vp == v {
                continue;
            }
            for &up in g.neighbors(vp) {
                if up == u || up == v || !g.has_edge(up, v) {
                    continue;
                }
                if g.has_edge(v, vp) {
                    return Some(Obstruction::ChordedFourCycle);
                }
                if g.degree(u) == 2 {
                    degree_two = true;
                }
            }
        }
    }
    degree_two.then_some(Obstruction::FourCycleDegreeTwo)
}
