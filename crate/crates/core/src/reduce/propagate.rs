//! Forced moves, trial propagation, and the pseudo-feasibility loop.

use crate::error::{usage, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::{BasicViolation, Instance, Label, Labeling, Worklist};

use super::{Rule, RuleCounts};

/// Applies the three forced moves (U next to M1 goes to I, U next to I goes
/// to M, sole U-neighbor of an M0 goes to M) until the worklist drains.
///
/// Stops at the first Basic Condition violation; the instance is then dead
/// and must be discarded.
pub fn propagate(inst: &mut Instance, counts: &mut RuleCounts) -> Result<(), BasicViolation> {
    let r = drain(&inst.graph, &mut inst.labels, &mut inst.worklist, counts);
    if r.is_err() {
        counts.bump(Rule::BasicViolation);
    }
    r
}

pub(crate) fn drain(
    g: &Graph,
    labels: &mut Labeling,
    queue: &mut Worklist,
    counts: &mut RuleCounts,
) -> Result<(), BasicViolation> {
    while let Some(x) = queue.pop() {
        if !g.is_alive(x) {
            continue;
        }
        let outcome = settle(g, labels, queue, counts, x);
        if outcome.is_err() {
            queue.clear();
            return outcome;
        }
    }
    Ok(())
}

fn settle(
    g: &Graph,
    labels: &mut Labeling,
    queue: &mut Worklist,
    counts: &mut RuleCounts,
    x: Vertex,
) -> Result<(), BasicViolation> {
    match labels.get(x) {
        Label::U => Ok(()),
        Label::I => {
            for &y in g.neighbors(x) {
                match labels.get(y) {
                    Label::I => return Err(BasicViolation::AdjacentI(x.min(y), x.max(y))),
                    Label::U => {
                        labels.set(g, y, Label::M, queue);
                        counts.bump(Rule::INeighborToM);
                    }
                    Label::M => {}
                }
            }
            Ok(())
        }
        Label::M => match labels.m_count(x) {
            0 => {
                let mut us = g.neighbors(x).iter().copied().filter(|&y| labels.is_u(y));
                match (us.next(), us.next()) {
                    (None, _) => Err(BasicViolation::StrandedM(x)),
                    (Some(y), None) => {
                        labels.set(g, y, Label::M, queue);
                        counts.bump(Rule::SoleUNeighborToM);
                        Ok(())
                    }
                    _ => Ok(()),
                }
            }
            1 => {
                for &y in g.neighbors(x) {
                    if labels.is_u(y) {
                        labels.set(g, y, Label::I, queue);
                        counts.bump(Rule::M1NeighborToI);
                    }
                }
                Ok(())
            }
            _ => Err(BasicViolation::CrowdedM(x)),
        },
    }
}

/// Outcome of the two trial assignments of a U-vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Viability {
    /// Moving the vertex to M survives propagation.
    pub as_m: bool,
    /// Moving the vertex to I survives propagation.
    pub as_i: bool,
}

/// Runs both trial assignments of `v` on scratch labels.
///
/// Expects an instance that satisfies the Basic Conditions with propagation
/// already drained; the instance itself is not modified.
pub fn classify_reducibility(inst: &Instance, v: Vertex) -> Result<Viability> {
    if !inst.graph.is_alive(v) || !inst.labels.is_u(v) {
        return usage(format!("vertex {v} is not a live U-vertex"));
    }
    let mut queue = Worklist::new(inst.graph.capacity());
    Ok(viability(inst, v, &mut queue))
}

fn viability(inst: &Instance, v: Vertex, queue: &mut Worklist) -> Viability {
    Viability {
        as_m: trial(inst, v, Label::M, queue),
        as_i: trial(inst, v, Label::I, queue),
    }
}

fn trial(inst: &Instance, v: Vertex, label: Label, queue: &mut Worklist) -> bool {
    let mut scratch = inst.labels.clone();
    scratch.set(&inst.graph, v, label, queue);
    drain(&inst.graph, &mut scratch, queue, &mut RuleCounts::default()).is_ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pseudo {
    Unchanged,
    Changed,
    Infeasible,
}

/// Propagates, then repeatedly scans U-vertices in ascending id and commits
/// every reducible one, until no forced move or reducible vertex remains.
pub fn make_pseudo_feasible(inst: &mut Instance, counts: &mut RuleCounts) -> Pseudo {
    let before = inst.u_count();
    if propagate(inst, counts).is_err() {
        return Pseudo::Infeasible;
    }
    let mut queue = Worklist::new(inst.graph.capacity());
    loop {
        let mut hit = false;
        for v in 0..inst.graph.capacity() {
            if !inst.graph.is_alive(v) || !inst.labels.is_u(v) {
                continue;
            }
            let label = match viability(inst, v, &mut queue) {
                Viability {
                    as_m: true,
                    as_i: true,
                } => continue,
                Viability {
                    as_m: false,
                    as_i: false,
                } => {
                    counts.bump(Rule::InfeasibleVertex);
                    return Pseudo::Infeasible;
                }
                Viability { as_m: false, .. } => {
                    counts.bump(Rule::IReducible);
                    Label::I
                }
                Viability { as_i: false, .. } => {
                    counts.bump(Rule::MReducible);
                    Label::M
                }
            };
            inst.labels.set(&inst.graph, v, label, &mut inst.worklist);
            if propagate(inst, counts).is_err() {
                return Pseudo::Infeasible;
            }
            hit = true;
        }
        if !hit {
            break;
        }
    }
    if inst.u_count() == before {
        Pseudo::Unchanged
    } else {
        Pseudo::Changed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn propagated(g: Graph, m: &[Vertex], i: &[Vertex]) -> Result<Instance, BasicViolation> {
        let mut inst = Instance::with_labels(g, m, i).unwrap();
        propagate(&mut inst, &mut RuleCounts::default())?;
        inst.check_caches().unwrap();
        Ok(inst)
    }

    #[test]
    fn u_next_to_matched_pair_goes_to_i() {
        // 0-1 matched, 2 hangs off 1
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let inst = propagated(g, &[0, 1], &[]).unwrap();
        assert_eq!(inst.label(2), Label::I);
    }

    #[test]
    fn sole_u_neighbor_goes_to_m() {
        let g = Graph::path(2);
        let inst = propagated(g, &[0], &[]).unwrap();
        assert_eq!(inst.label(1), Label::M);
    }

    #[test]
    fn cascade_along_path() {
        let g = Graph::path(3);
        let inst = propagated(g, &[0], &[]).unwrap();
        assert_eq!(
            (inst.label(0), inst.label(1), inst.label(2)),
            (Label::M, Label::M, Label::I)
        );
    }

    #[test]
    fn adjacent_i_is_a_violation() {
        let g = Graph::path(3);
        // 1 -> I forces 0 and 2 into M; both then strand
        let err = propagated(g, &[], &[1]).unwrap_err();
        assert_eq!(err.condition(), 3);
        let g = Graph::path(2);
        assert_eq!(propagated(g, &[], &[0, 1]).unwrap_err().condition(), 1);
    }

    #[test]
    fn k4_vertex_is_only_i_reducible_under_trials() {
        // Trial propagation cannot see the clique argument: moving a K4 vertex
        // to I forces the other three into M, which trips the crowding check,
        // but moving it to M forces nothing.
        let inst = Instance::new(Graph::complete(4));
        let v = classify_reducibility(&inst, 0).unwrap();
        assert_eq!(
            v,
            Viability {
                as_m: true,
                as_i: false
            }
        );
    }

    #[test]
    fn two_m_neighbors_make_i_reducible() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
        let mut inst = Instance::with_labels(g, &[1, 2], &[]).unwrap();
        // keep the trial honest: 3 and 4 give the M-vertices a second U-neighbor
        inst.worklist.clear();
        let v = classify_reducibility(&inst, 0).unwrap();
        assert!(!v.as_m);
    }

    #[test]
    fn sole_support_makes_m_reducible() {
        // 1 is the only neighbor of the U-vertex 0
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let inst = Instance::new(g);
        assert!(!classify_reducibility(&inst, 1).unwrap().as_i);
    }

    #[test]
    fn classify_rejects_labeled_vertex() {
        let inst = Instance::with_labels(Graph::path(2), &[0], &[]).unwrap();
        assert!(classify_reducibility(&inst, 0).is_err());
    }

    #[test]
    fn pseudo_feasibility_of_small_graphs() {
        let mut counts = RuleCounts::default();
        let mut c4 = Instance::new(Graph::cycle(4));
        assert_eq!(
            make_pseudo_feasible(&mut c4, &mut counts),
            Pseudo::Infeasible
        );

        let mut p2 = Instance::new(Graph::path(2));
        assert_eq!(make_pseudo_feasible(&mut p2, &mut counts), Pseudo::Changed);
        assert_eq!(p2.u_count(), 0);

        let mut c6 = Instance::new(Graph::cycle(6));
        assert_eq!(
            make_pseudo_feasible(&mut c6, &mut counts),
            Pseudo::Unchanged
        );
    }
}
