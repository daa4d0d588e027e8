//! Lifting solutions back through recorded rewrites.

use crate::error::{internal, Result};
use crate::graph::Edge;
use crate::reduce::RewriteRecord;

use super::Solution;

/// Replays `trace` backwards, turning a solution of the rewritten instance
/// into one of the instance the trace started from.
///
/// Weights carried by the rewritten edges already account for the deleted
/// ones, so only tail and strip records change the total.
pub fn reconstruct(trace: &[RewriteRecord], f: Solution) -> Result<Solution> {
    let Solution {
        mut edges,
        mut total_weight,
    } = f;
    for record in trace.iter().rev() {
        match record {
            RewriteRecord::EdgeDeletion { .. } | RewriteRecord::Small { .. } => {}
            RewriteRecord::Strip { matched, weight } => {
                edges.extend(matched.iter().copied());
                total_weight += weight;
            }
            RewriteRecord::SixCycle { cycle } => {
                let [v1, v2, v3, v4, v5, v6] = *cycle;
                if edges.contains(&Edge::new(v4, v5)) {
                    edges.insert(Edge::new(v1, v2));
                } else if edges.contains(&Edge::new(v5, v6)) {
                    edges.insert(Edge::new(v2, v3));
                } else {
                    return internal(format!("six-cycle vertex {v5} is unmatched"));
                }
            }
            RewriteRecord::Chain {
                path,
                merged,
                from_first,
                from_last,
            } => {
                let [v1, v2, v3, v4] = *path;
                let mut at = edges.iter().filter(|e| e.contains(*merged));
                let (Some(&e), None) = (at.next(), at.next()) else {
                    return internal(format!("contracted vertex {merged} is not matched once"));
                };
                let c = e.other(*merged).expect("edge contains merged vertex");
                edges.remove(&e);
                if from_last.contains(&c) {
                    edges.insert(Edge::new(v4, c));
                    edges.insert(Edge::new(v1, v2));
                } else if from_first.contains(&c) {
                    edges.insert(Edge::new(v1, c));
                    edges.insert(Edge::new(v3, v4));
                } else {
                    return internal(format!(
                        "partner {c} of {merged} is not an inherited neighbor"
                    ));
                }
            }
            RewriteRecord::Tail {
                center,
                exit_from,
                exit,
                alternative,
                offset,
            } => {
                let exit_matched = edges.iter().any(|e| e.contains(*exit));
                let partner = if exit_matched {
                    *alternative
                } else {
                    *exit_from
                };
                edges.insert(Edge::new(*center, partner));
                total_weight += offset;
            }
        }
    }
    Ok(Solution {
        edges,
        total_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Weight;

    fn sol(edges: &[(usize, usize)]) -> Solution {
        Solution {
            edges: edges.iter().map(|&(a, b)| Edge::new(a, b)).collect(),
            total_weight: Weight::default(),
        }
    }

    #[test]
    fn empty_trace_is_identity() {
        let f = sol(&[(0, 1)]);
        assert_eq!(reconstruct(&[], f.clone()).unwrap(), f);
    }

    #[test]
    fn chain_partner_from_first_end_adds_far_edge() {
        let rec = RewriteRecord::Chain {
            path: [1, 2, 3, 4],
            merged: 9,
            from_first: vec![0],
            from_last: vec![5],
        };
        let out = reconstruct(&[rec], sol(&[(0, 9)])).unwrap();
        assert_eq!(out, sol(&[(0, 1), (3, 4)]));
    }

    #[test]
    fn six_cycle_with_far_edge_matched() {
        let rec = RewriteRecord::SixCycle {
            cycle: [1, 2, 3, 4, 5, 6],
        };
        let out = reconstruct(&[rec], sol(&[(5, 6)])).unwrap();
        assert_eq!(out, sol(&[(2, 3), (5, 6)]));
    }

    #[test]
    fn unmatched_chain_vertex_is_an_error() {
        let rec = RewriteRecord::Chain {
            path: [1, 2, 3, 4],
            merged: 9,
            from_first: vec![0],
            from_last: vec![5],
        };
        assert!(reconstruct(&[rec], sol(&[])).is_err());
    }
}
