//! Empirical check of how many undecided vertices each branch removes.

use log::warn;
use serde::Serialize;

use crate::branch::{BranchChoice, Step};
use crate::error::Result;
use crate::format::write_instance;
use crate::instance::{Instance, Label};
use crate::reduce::{reduce_to_fixpoint, Reduction, RuleCounts};

use super::SolveStats;

/// Running summary of eliminated-U counts for one branch case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EliminationTally {
    pub branches: u64,
    pub min_to_m: Option<usize>,
    pub min_to_i: Option<usize>,
    pub sum_to_m: u64,
    pub sum_to_i: u64,
    /// Children that reduced to infeasible and so were not measured.
    pub infeasible_children: u64,
}

impl EliminationTally {
    fn record(&mut self, to_m: Option<usize>, to_i: Option<usize>) {
        self.branches += 1;
        for (d, min, sum) in [
            (to_m, &mut self.min_to_m, &mut self.sum_to_m),
            (to_i, &mut self.min_to_i, &mut self.sum_to_i),
        ] {
            match d {
                Some(d) => {
                    *min = Some(min.map_or(d, |m| m.min(d)));
                    *sum += d as u64;
                }
                None => self.infeasible_children += 1,
            }
        }
    }

    pub fn merge(&mut self, other: &EliminationTally) {
        self.branches += other.branches;
        self.sum_to_m += other.sum_to_m;
        self.sum_to_i += other.sum_to_i;
        self.infeasible_children += other.infeasible_children;
        for (mine, theirs) in [
            (&mut self.min_to_m, other.min_to_m),
            (&mut self.min_to_i, other.min_to_i),
        ] {
            if let Some(t) = theirs {
                *mine = Some(mine.map_or(t, |m| m.min(t)));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub step: Step,
    pub vertex: usize,
    pub anchor: Option<usize>,
    /// Label the vertex received in the offending child.
    pub label: String,
    pub eliminated: usize,
    pub required: usize,
    /// The parent instance in the text graph format, labels as comments.
    pub reproducer: String,
}

/// Minimum eliminated-U counts `(to M, to I)` promised for a branch case.
pub fn required_elimination(choice: &BranchChoice) -> (Option<usize>, Option<usize>) {
    let lambda = choice.degree_excess as usize;
    let x = choice.second_ring_undecided;
    match choice.step {
        Step::Effective => (Some(4 + lambda + x), Some(8 - lambda - x.min(4))),
        Step::DegreeTwoAnchor => (Some(6), Some(6)),
        Step::DegreeTwoPair => (Some(7), Some(4)),
        Step::NoM => (None, Some(4)),
        Step::FiveCycle | Step::AnyM0 => (None, None),
    }
}

fn eliminated(inst: &Instance, choice: &BranchChoice, label: Label) -> Result<Option<usize>> {
    let before = inst.u_count();
    let mut child = inst.fork();
    child.assign(choice.vertex, label)?;
    Ok(
        match reduce_to_fixpoint(&mut child, &mut RuleCounts::default())? {
            Reduction::Infeasible => None,
            Reduction::Reduced => Some(before - child.u_count()),
        },
    )
}

/// Measures both children of a branch and records any shortfall.
pub(super) fn check(inst: &Instance, choice: &BranchChoice, stats: &mut SolveStats) -> Result<()> {
    if !inst.graph.is_connected() || !inst.m1_vertices().is_empty() {
        return Ok(());
    }
    let to_m = eliminated(inst, choice, Label::M)?;
    let to_i = eliminated(inst, choice, Label::I)?;
    stats
        .eliminated
        .entry(choice.step)
        .or_default()
        .record(to_m, to_i);
    let (need_m, need_i) = required_elimination(choice);
    for (label, got, need) in [(Label::M, to_m, need_m), (Label::I, to_i, need_i)] {
        if let (Some(got), Some(need)) = (got, need) {
            if got < need {
                warn!(
                    "case {} on vertex {} ({label}) removed {got} undecided vertices, expected {need}",
                    choice.step, choice.vertex
                );
                stats.violations.push(BoundViolation {
                    step: choice.step,
                    vertex: choice.vertex,
                    anchor: choice.anchor,
                    label: label.to_string(),
                    eliminated: got,
                    required: need,
                    reproducer: write_instance(inst),
                });
            }
        }
    }
    Ok(())
}
