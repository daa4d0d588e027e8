//! Choice of the vertex to branch on in a reduced instance.

use std::fmt;

use serde::Serialize;

use crate::error::{internal, usage, Result};
use crate::graph::{Center, Graph, Vertex};
use crate::instance::Instance;

/// Which case of the selection ladder produced a branch vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Step {
    /// Effective vertex: degree ≥ 3 with an M0-neighbor.
    #[serde(rename = "effective-vertex")]
    Effective,
    /// Neighbor of a degree-2 M0-vertex.
    #[serde(rename = "degree-two-anchor")]
    DegreeTwoAnchor,
    /// Degree-2 neighbor of an M0-vertex with exactly two such neighbors.
    #[serde(rename = "degree-two-pair")]
    DegreeTwoPair,
    /// Degree-2 neighbor of an M0-vertex on a 5-cycle.
    #[serde(rename = "five-cycle")]
    FiveCycle,
    /// Any remaining M0-vertex.
    #[serde(rename = "any-m0")]
    AnyM0,
    /// No M-vertex at all.
    #[serde(rename = "no-m")]
    NoM,
}

impl Step {
    pub const ALL: [Step; 6] = [
        Step::Effective,
        Step::DegreeTwoAnchor,
        Step::DegreeTwoPair,
        Step::FiveCycle,
        Step::AnyM0,
        Step::NoM,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Step::Effective => "effective-vertex",
            Step::DegreeTwoAnchor => "degree-two-anchor",
            Step::DegreeTwoPair => "degree-two-pair",
            Step::FiveCycle => "five-cycle",
            Step::AnyM0 => "any-m0",
            Step::NoM => "no-m",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchChoice {
    pub vertex: Vertex,
    pub step: Step,
    /// The M0-vertex the choice was made around, if any.
    pub anchor: Option<Vertex>,
    /// `min(1, deg(anchor) - 2)`.
    pub degree_excess: u8,
    /// Undecided vertices at distance exactly 2 from the edge `anchor`–`vertex`.
    pub second_ring_undecided: usize,
}

/// `|N2(u v)|`, the vertices at distance exactly 2 from the edge.
fn ring2(g: &Graph, u: Vertex, v: Vertex) -> std::collections::BTreeSet<Vertex> {
    g.neighbors_k(Center::Edge(u, v), 2).expect("edge is live")
}

fn choice(inst: &Instance, vertex: Vertex, step: Step, anchor: Option<Vertex>) -> BranchChoice {
    let g = &inst.graph;
    let (degree_excess, second_ring_undecided) = match anchor {
        Some(u) => (
            g.degree(u).saturating_sub(2).min(1) as u8,
            ring2(g, u, vertex)
                .iter()
                .filter(|&&x| inst.labels.is_u(x))
                .count(),
        ),
        None => (0, 0),
    };
    BranchChoice {
        vertex,
        step,
        anchor,
        degree_excess,
        second_ring_undecided,
    }
}

fn degree_two_neighbors(inst: &Instance, u: Vertex) -> Vec<Vertex> {
    inst.u_neighbors(u)
        .filter(|&v| inst.graph.degree(v) == 2)
        .collect()
}

/// Picks the branch vertex by the first matching case; ties go to the
/// lowest vertex id.
///
/// Expects a reduced, connected instance with `I = M1 = ∅`, more than six
/// undecided vertices, and maximum degree at least 3.
pub fn select_branch_vertex(inst: &Instance) -> Result<BranchChoice> {
    let g = &inst.graph;
    if !inst.i_vertices().is_empty() || !inst.m1_vertices().is_empty() {
        return usage("branching needs I and M1 to be empty");
    }
    if inst.u_count() <= 6 || g.max_degree() <= 2 {
        return usage("instance is small enough for the base case");
    }
    let m0 = inst.m0_vertices();

    let effective = g
        .vertices()
        .filter(|&v| inst.labels.is_u(v) && g.degree(v) >= 3)
        .flat_map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| inst.labels.is_m0(u))
                .map(move |&u| (g.degree(u), v, u))
        })
        .min();
    let picked = if let Some((_, v, u)) = effective {
        choice(inst, v, Step::Effective, Some(u))
    } else if m0.is_empty() {
        choice(inst, select_without_m(g), Step::NoM, None)
    } else {
        if cfg!(debug_assertions) {
            check_no_effective_shape(inst, &m0)?;
        }
        select_around_m0(inst, &m0)?
    };
    if cfg!(debug_assertions) {
        let first = first_applicable(inst);
        if first != Some(picked.step) {
            return internal(format!(
                "selected case {} but the first applicable case is {first:?}",
                picked.step
            ));
        }
    }
    Ok(picked)
}

fn select_around_m0(inst: &Instance, m0: &[Vertex]) -> Result<BranchChoice> {
    let g = &inst.graph;
    if let Some(&u) = m0.iter().find(|&&u| g.degree(u) == 2) {
        return Ok(choice(
            inst,
            g.neighbors(u)[0],
            Step::DegreeTwoAnchor,
            Some(u),
        ));
    }
    for &u in m0 {
        let twos = degree_two_neighbors(inst, u);
        if twos.len() == 2 {
            let v = max_ring2(g, u, &twos);
            return Ok(choice(inst, v, Step::DegreeTwoPair, Some(u)));
        }
    }
    for &u in m0 {
        let twos = degree_two_neighbors(inst, u);
        if twos.len() < 3 {
            continue;
        }
        if let Some(cycle) = g.find_small_cycle(u, 5, |_| true) {
            let (v2, v3) = (cycle[1], cycle[4]);
            if let Some(&v1) = twos.iter().find(|&&x| x != v2 && x != v3) {
                return Ok(choice(inst, v1, Step::FiveCycle, Some(u)));
            }
        }
    }
    let u = m0[0];
    let v = max_ring2(g, u, g.neighbors(u));
    Ok(choice(inst, v, Step::AnyM0, Some(u)))
}

/// Neighbor of `u` among `candidates` maximizing `|N2(u v)|`.
fn max_ring2(g: &Graph, u: Vertex, candidates: &[Vertex]) -> Vertex {
    let mut best = (0, usize::MAX);
    for &v in candidates {
        let size = ring2(g, u, v).len();
        if best.1 == usize::MAX || size > best.0 || (size == best.0 && v < best.1) {
            best = (size, v);
        }
    }
    best.1
}

/// With `M = ∅`: prefer short cycles, then neighbors of degree-2 vertices,
/// then anything; within a class take maximum degree, then lowest id.
fn select_without_m(g: &Graph) -> Vertex {
    let any = |_: Vertex| true;
    let classes: [&dyn Fn(Vertex) -> bool; 3] = [
        &|v| g.find_small_cycle(v, 3, any).is_some() || g.find_small_cycle(v, 4, any).is_some(),
        &|v| g.neighbors(v).iter().any(|&y| g.degree(y) == 2),
        &|_| true,
    ];
    for class in classes {
        let best = g
            .vertices()
            .filter(|&v| class(v))
            .max_by(|&a, &b| g.degree(a).cmp(&g.degree(b)).then(b.cmp(&a)));
        if let Some(v) = best {
            return v;
        }
    }
    unreachable!("caller guarantees a non-empty graph")
}

/// Without an effective vertex, every U-neighbor `v` of an M0-vertex `u` has
/// degree at most 2 and the whole second ring of `uv` is undecided.
fn check_no_effective_shape(inst: &Instance, m0: &[Vertex]) -> Result<()> {
    let g = &inst.graph;
    for &u in m0 {
        for v in inst.u_neighbors(u) {
            if g.degree(v) > 2 {
                return internal(format!("neighbor {v} of M0-vertex {u} has degree > 2"));
            }
            if ring2(g, u, v).iter().any(|&x| !inst.labels.is_u(x)) {
                return internal(format!(
                    "second ring of edge {u}-{v} holds a decided vertex"
                ));
            }
        }
    }
    Ok(())
}

/// Independent re-scan of which case applies first.
fn first_applicable(inst: &Instance) -> Option<Step> {
    let g = &inst.graph;
    let lab = &inst.labels;
    let m0: Vec<Vertex> = g.vertices().filter(|&v| lab.is_m0(v)).collect();
    let deg2 = |u: Vertex| {
        g.neighbors(u)
            .iter()
            .filter(|&&v| lab.is_u(v) && g.degree(v) == 2)
            .count()
    };
    let checks: [(Step, bool); 6] = [
        (
            Step::Effective,
            m0.iter().any(|&u| {
                g.neighbors(u)
                    .iter()
                    .any(|&v| lab.is_u(v) && g.degree(v) >= 3)
            }),
        ),
        (Step::DegreeTwoAnchor, m0.iter().any(|&u| g.degree(u) == 2)),
        (Step::DegreeTwoPair, m0.iter().any(|&u| deg2(u) == 2)),
        (
            Step::FiveCycle,
            m0.iter()
                .any(|&u| deg2(u) >= 3 && g.find_small_cycle(u, 5, |_| true).is_some()),
        ),
        (Step::AnyM0, !m0.is_empty()),
        (Step::NoM, m0.is_empty() && g.num_vertices() > 0),
    ];
    checks.iter().find(|c| c.1).map(|c| c.0)
}
