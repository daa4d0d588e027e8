//! Shape guarantees of fully reduced instances.

use std::fmt;

use crate::graph::{Center, Vertex};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureViolation {
    /// An I- or M1-vertex survived.
    Decided(Vertex),
    /// A vertex of degree at most 1 that is not a U-leaf hanging off an M0.
    BadLeaf(Vertex),
    /// M0-vertex on a triangle or 4-cycle.
    ShortCycle(Vertex),
    /// Two M0-vertices share a U-neighbor.
    SharedNeighbor(Vertex, Vertex),
    /// Degree-2 M0-vertex on a 5-cycle.
    FiveCycle(Vertex),
    /// M0-vertex with fewer than two U-neighbors.
    FewUNeighbors(Vertex),
    /// M0-vertex with fewer than two edges leaving its closed neighborhood.
    FewExits(Vertex),
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Decided(v) => write!(f, "vertex {v} is in I or M1"),
            Self::BadLeaf(v) => write!(f, "low-degree vertex {v} is not a U-leaf of an M0-vertex"),
            Self::ShortCycle(u) => write!(f, "M0-vertex {u} lies on a triangle or 4-cycle"),
            Self::SharedNeighbor(a, b) => write!(f, "M0-vertices {a} and {b} share a U-neighbor"),
            Self::FiveCycle(u) => write!(f, "degree-2 M0-vertex {u} lies on a 5-cycle"),
            Self::FewUNeighbors(u) => write!(f, "M0-vertex {u} has fewer than two U-neighbors"),
            Self::FewExits(u) => {
                write!(
                    f,
                    "M0-vertex {u} has fewer than two edges to its second neighborhood"
                )
            }
        }
    }
}

/// Checks the guarantees every reduced instance (with `I = M1 = ∅`) gives
/// on each of its components.
pub fn check_reduced_structure(inst: &Instance) -> Result<(), StructureViolation> {
    let g = &inst.graph;
    let lab = &inst.labels;
    let mut owner: Vec<Option<Vertex>> = vec![None; g.capacity()];
    for v in g.vertices() {
        if lab.is_i(v) || lab.is_m1(v) {
            return Err(StructureViolation::Decided(v));
        }
        if g.degree(v) <= 1 {
            let ok = lab.is_u(v) && g.neighbors(v).first().is_some_and(|&u| lab.is_m0(u));
            if !ok {
                return Err(StructureViolation::BadLeaf(v));
            }
        }
    }
    for u in inst.m0_vertices() {
        let any = |_: Vertex| true;
        if g.find_small_cycle(u, 3, any).is_some() || g.find_small_cycle(u, 4, any).is_some() {
            return Err(StructureViolation::ShortCycle(u));
        }
        if g.degree(u) == 2 && g.find_small_cycle(u, 5, any).is_some() {
            return Err(StructureViolation::FiveCycle(u));
        }
        let us: Vec<Vertex> = inst.u_neighbors(u).collect();
        for &v in &us {
            if let Some(other) = owner[v].replace(u) {
                return Err(StructureViolation::SharedNeighbor(other, u));
            }
        }
        if us.len() < 2 {
            return Err(StructureViolation::FewUNeighbors(u));
        }
        let second = g.neighbors_k(Center::Vertex(u), 2).expect("live vertex");
        let exits: usize = g
            .neighbors(u)
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|y| second.contains(y)).count())
            .sum();
        if exits < 2 {
            return Err(StructureViolation::FewExits(u));
        }
    }
    Ok(())
}
