//! Reduction rules and the fixpoint reducer.

mod obstructions;
mod propagate;
mod rules;
mod structure;

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::graph::{Edge, Vertex, Weight};
use crate::instance::Instance;

pub use obstructions::{structural_reducibility, Obstruction, Screen, Verdict};
pub use propagate::{classify_reducibility, make_pseudo_feasible, propagate, Pseudo, Viability};
pub use rules::{
    apply_rule, apply_site, apply_structural_rules, find_site, Site, STRUCTURAL_RULES,
};
pub use structure::{check_reduced_structure, StructureViolation};

/// Every reduction rule, in the order the solver consults them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Halt on a Basic Condition violation.
    BasicViolation,
    M1NeighborToI,
    INeighborToM,
    SoleUNeighborToM,
    /// Halt on a vertex that is both i- and m-reducible.
    InfeasibleVertex,
    IReducible,
    MReducible,
    TriangleEdge,
    FiveCycleEdge,
    SixCycle,
    Chain,
    Tail,
    Small,
    /// Removal of decided vertices (`I ∪ M1`) before rewriting.
    Strip,
}

impl Rule {
    pub const ALL: [Rule; 14] = [
        Rule::BasicViolation,
        Rule::M1NeighborToI,
        Rule::INeighborToM,
        Rule::SoleUNeighborToM,
        Rule::InfeasibleVertex,
        Rule::IReducible,
        Rule::MReducible,
        Rule::TriangleEdge,
        Rule::FiveCycleEdge,
        Rule::SixCycle,
        Rule::Chain,
        Rule::Tail,
        Rule::Small,
        Rule::Strip,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::BasicViolation => "basic-violation",
            Rule::M1NeighborToI => "m1-neighbor-to-i",
            Rule::INeighborToM => "i-neighbor-to-m",
            Rule::SoleUNeighborToM => "sole-u-neighbor-to-m",
            Rule::InfeasibleVertex => "infeasible-vertex",
            Rule::IReducible => "i-reducible",
            Rule::MReducible => "m-reducible",
            Rule::TriangleEdge => "triangle-edge",
            Rule::FiveCycleEdge => "five-cycle-edge",
            Rule::SixCycle => "six-cycle",
            Rule::Chain => "chain",
            Rule::Tail => "tail",
            Rule::Small => "small",
            Rule::Strip => "strip",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Application tally per rule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleCounts([u64; Rule::ALL.len()]);

impl RuleCounts {
    pub fn bump(&mut self, rule: Rule) {
        self.0[rule as usize] += 1;
    }

    pub fn get(&self, rule: Rule) -> u64 {
        self.0[rule as usize]
    }

    pub fn merge(&mut self, other: &RuleCounts) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }
}

impl Serialize for RuleCounts {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(Rule::ALL.len()))?;
        for rule in Rule::ALL {
            map.serialize_entry(rule.name(), &self.get(rule))?;
        }
        map.end()
    }
}

/// What reconstruction needs to undo one rewrite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteRecord {
    /// An edge proven never to join two matched vertices.
    EdgeDeletion { edge: Edge },
    /// `cycle[0..3]` were deleted; weights of `cycle[3]-cycle[4]` and
    /// `cycle[4]-cycle[5]` absorbed the two deleted edges.
    SixCycle { cycle: [Vertex; 6] },
    /// `path` was contracted into `merged`, which inherited `from_first`
    /// from `path[0]` and `from_last` from `path[3]`.
    Chain {
        path: [Vertex; 4],
        merged: Vertex,
        from_first: Vec<Vertex>,
        from_last: Vec<Vertex>,
    },
    /// `N[center]` was removed; it was left only through
    /// `exit_from`–`exit`. `alternative` is the lightest other neighbor and
    /// `offset` the weight of `center`–`exit_from`.
    Tail {
        center: Vertex,
        exit_from: Vertex,
        exit: Vertex,
        alternative: Vertex,
        offset: Weight,
    },
    /// `partner` was forced into M next to `center`; nothing to undo.
    Small { center: Vertex, partner: Vertex },
    /// Decided vertices were removed along with their matched edges.
    Strip { matched: Vec<Edge>, weight: Weight },
}

/// Removes all I- and M1-vertices, recording the matched pairs among them.
///
/// Expects a pseudo-feasible instance. Returns whether anything was removed.
pub fn strip_decided(inst: &mut Instance, counts: &mut RuleCounts) -> Result<bool> {
    let mut doomed = inst.i_vertices();
    let m1 = inst.m1_vertices();
    let mut matched = Vec::new();
    let mut weight = Weight::default();
    for &v in &m1 {
        let partner = inst
            .graph
            .neighbors(v)
            .iter()
            .copied()
            .find(|&y| inst.labels.is_m(y))
            .expect("M1-vertex has an M-neighbor");
        if v < partner {
            matched.push(Edge::new(v, partner));
            weight += inst.graph.weight(v, partner);
        }
    }
    doomed.extend(m1);
    if doomed.is_empty() {
        return Ok(false);
    }
    inst.delete_vertices(&doomed)?;
    counts.bump(Rule::Strip);
    if !matched.is_empty() {
        inst.trace.push(RewriteRecord::Strip { matched, weight });
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Reduced,
    Infeasible,
}

/// Alternates forced moves, reducibility commits, stripping of decided
/// vertices, and rewriting until nothing applies.
///
/// A reduced result has `I = M1 = ∅`; debug builds check the structural
/// guarantees of reduced instances on every component.
pub fn reduce_to_fixpoint(inst: &mut Instance, counts: &mut RuleCounts) -> Result<Reduction> {
    loop {
        if make_pseudo_feasible(inst, counts) == Pseudo::Infeasible {
            return Ok(Reduction::Infeasible);
        }
        strip_decided(inst, counts)?;
        if apply_structural_rules(inst, counts)?.is_none() {
            break;
        }
    }
    if cfg!(debug_assertions) {
        if let Err(v) = check_reduced_structure(inst) {
            return Err(crate::error::Error::Internal(format!(
                "reduced instance: {v}"
            )));
        }
    }
    Ok(Reduction::Reduced)
}
