//! Search state `(G, M, I)`: a graph plus a three-way vertex labeling.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::graph::{Contraction, Edge, Graph, Vertex, Weight};
use crate::reduce::RewriteRecord;
use crate::solve::Solution;

/// Undecided, matched side, or independent side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    U,
    M,
    I,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::U => "U",
            Label::M => "M",
            Label::I => "I",
        };
        f.write_str(s)
    }
}

/// Per-vertex labels plus a cached count of M-labeled neighbors.
///
/// M0/M1 membership is derived from the count and never stored.
#[derive(Clone, Debug)]
pub struct Labeling {
    state: Vec<Label>,
    m_count: Vec<u32>,
}

impl Labeling {
    pub fn new(capacity: usize) -> Self {
        Labeling {
            state: vec![Label::U; capacity],
            m_count: vec![0; capacity],
        }
    }

    pub fn get(&self, v: Vertex) -> Label {
        self.state[v]
    }

    pub fn m_count(&self, v: Vertex) -> u32 {
        self.m_count[v]
    }

    pub fn is_u(&self, v: Vertex) -> bool {
        self.state[v] == Label::U
    }

    pub fn is_m(&self, v: Vertex) -> bool {
        self.state[v] == Label::M
    }

    pub fn is_i(&self, v: Vertex) -> bool {
        self.state[v] == Label::I
    }

    pub fn is_m0(&self, v: Vertex) -> bool {
        self.is_m(v) && self.m_count[v] == 0
    }

    pub fn is_m1(&self, v: Vertex) -> bool {
        self.is_m(v) && self.m_count[v] == 1
    }

    fn grow(&mut self, capacity: usize) {
        if self.state.len() < capacity {
            self.state.resize(capacity, Label::U);
            self.m_count.resize(capacity, 0);
        }
    }

    /// Labels a U-vertex and updates neighbor caches; the vertex and all its
    /// neighbors are queued for propagation.
    pub(crate) fn set(&mut self, g: &Graph, v: Vertex, label: Label, queue: &mut Worklist) {
        debug_assert!(self.is_u(v) && label != Label::U);
        self.state[v] = label;
        queue.push(v);
        for &y in g.neighbors(v) {
            if label == Label::M {
                self.m_count[y] += 1;
            }
            queue.push(y);
        }
    }

    /// Count of live M-neighbors recomputed from scratch.
    pub fn recount(&self, g: &Graph, v: Vertex) -> u32 {
        g.neighbors(v).iter().filter(|&&y| self.is_m(y)).count() as u32
    }
}

/// FIFO of vertices awaiting rule checks; each vertex is queued at most once.
#[derive(Clone, Debug, Default)]
pub struct Worklist {
    queue: VecDeque<Vertex>,
    queued: Vec<bool>,
}

impl Worklist {
    pub fn new(capacity: usize) -> Self {
        Worklist {
            queue: VecDeque::new(),
            queued: vec![false; capacity],
        }
    }

    pub fn push(&mut self, v: Vertex) {
        if v >= self.queued.len() {
            self.queued.resize(v + 1, false);
        }
        if !self.queued[v] {
            self.queued[v] = true;
            self.queue.push_back(v);
        }
    }

    pub fn pop(&mut self) -> Option<Vertex> {
        let v = self.queue.pop_front()?;
        self.queued[v] = false;
        Some(v)
    }

    pub fn clear(&mut self) {
        while self.pop().is_some() {}
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }
}

/// Which Basic Condition failed, with a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicViolation {
    /// Two adjacent I-vertices.
    AdjacentI(Vertex, Vertex),
    /// An M-vertex with two or more M-neighbors.
    CrowdedM(Vertex),
    /// An M-vertex with no M-neighbor and no U-neighbor.
    StrandedM(Vertex),
}

impl BasicViolation {
    /// Number (1-3) of the violated condition.
    pub fn condition(&self) -> u8 {
        match self {
            BasicViolation::AdjacentI(..) => 1,
            BasicViolation::CrowdedM(_) => 2,
            BasicViolation::StrandedM(_) => 3,
        }
    }
}

impl fmt::Display for BasicViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicViolation::AdjacentI(a, b) => write!(f, "I-vertices {a} and {b} are adjacent"),
            BasicViolation::CrowdedM(v) => write!(f, "M-vertex {v} has two or more M-neighbors"),
            BasicViolation::StrandedM(v) => {
                write!(f, "M-vertex {v} has neither an M-neighbor nor a U-neighbor")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub(crate) graph: Graph,
    pub(crate) labels: Labeling,
    pub(crate) trace: Vec<RewriteRecord>,
    pub(crate) worklist: Worklist,
}

impl Instance {
    /// Every vertex undecided; all vertices queued for the first propagation.
    pub fn new(graph: Graph) -> Self {
        let cap = graph.capacity();
        let mut worklist = Worklist::new(cap);
        for v in graph.vertices() {
            worklist.push(v);
        }
        Instance {
            graph,
            labels: Labeling::new(cap),
            trace: Vec::new(),
            worklist,
        }
    }

    /// Instance with the given committed sets and no propagation applied.
    pub fn with_labels(graph: Graph, m: &[Vertex], i: &[Vertex]) -> Result<Self> {
        let mut inst = Instance::new(graph);
        for &v in m {
            inst.assign(v, Label::M)?;
        }
        for &v in i {
            inst.assign(v, Label::I)?;
        }
        Ok(inst)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labels(&self) -> &Labeling {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> Label {
        self.labels.get(v)
    }

    pub fn trace(&self) -> &[RewriteRecord] {
        &self.trace
    }

    /// Deep copy with an empty rewrite trace, used for branch children and
    /// decomposed components.
    pub fn fork(&self) -> Instance {
        Instance {
            graph: self.graph.clone(),
            labels: self.labels.clone(),
            trace: Vec::new(),
            worklist: self.worklist.clone(),
        }
    }

    /// Copy restricted to `keep` (ids preserved), with an empty trace.
    pub fn restricted(&self, keep: &[Vertex]) -> Instance {
        let graph = self.graph.induced(keep);
        let mut labels = Labeling::new(graph.capacity());
        let mut worklist = Worklist::new(graph.capacity());
        for v in graph.vertices() {
            labels.state[v] = self.labels.get(v);
            worklist.push(v);
        }
        for v in graph.vertices() {
            labels.m_count[v] = labels.recount(&graph, v);
        }
        Instance {
            graph,
            labels,
            trace: Vec::new(),
            worklist,
        }
    }

    pub fn assign(&mut self, v: Vertex, label: Label) -> Result<()> {
        if !self.graph.is_alive(v) {
            return Err(Error::DeadVertex(v));
        }
        if label == Label::U {
            return usage("cannot assign label U");
        }
        if !self.labels.is_u(v) {
            return usage(format!(
                "vertex {v} is already labeled {}",
                self.labels.get(v)
            ));
        }
        self.labels.set(&self.graph, v, label, &mut self.worklist);
        Ok(())
    }

    /// Deletes vertices, keeping the M-neighbor caches of survivors exact.
    pub(crate) fn delete_vertices(&mut self, vs: &[Vertex]) -> Result<()> {
        for &v in vs {
            if !self.graph.is_alive(v) {
                return Err(Error::DeadVertex(v));
            }
        }
        let doomed: BTreeSet<Vertex> = vs.iter().copied().collect();
        for &v in &doomed {
            for &y in self.graph.neighbors(v) {
                if !doomed.contains(&y) {
                    if self.labels.is_m(v) {
                        self.labels.m_count[y] -= 1;
                    }
                    self.worklist.push(y);
                }
            }
        }
        self.graph.delete_vertices(vs)
    }

    /// Removes an edge, keeping the M-neighbor caches exact.
    pub(crate) fn remove_edge(&mut self, a: Vertex, b: Vertex) -> Result<()> {
        self.graph.remove_edge(a, b)?;
        if self.labels.is_m(a) {
            self.labels.m_count[b] -= 1;
        }
        if self.labels.is_m(b) {
            self.labels.m_count[a] -= 1;
        }
        self.worklist.push(a);
        self.worklist.push(b);
        Ok(())
    }

    /// Contracts a path into a fresh vertex carrying `label`; see
    /// [`Graph::contract_path`] for the weight shifts.
    pub(crate) fn contract_path(
        &mut self,
        path: &[Vertex],
        first_shift: Weight,
        last_shift: Weight,
        label: Label,
    ) -> Result<Contraction> {
        let c = self.graph.contract_path(path, first_shift, last_shift)?;
        self.labels.grow(self.graph.capacity());
        self.labels.state[c.vertex] = label;
        self.labels.m_count[c.vertex] = self.labels.recount(&self.graph, c.vertex);
        self.worklist.push(c.vertex);
        for &x in self.graph.neighbors(c.vertex) {
            self.labels.m_count[x] = self.labels.recount(&self.graph, x);
            self.worklist.push(x);
        }
        Ok(c)
    }

    fn with_label(&self, label: Label) -> impl Iterator<Item = Vertex> + '_ {
        self.graph
            .vertices()
            .filter(move |&v| self.labels.get(v) == label)
    }

    pub fn u_vertices(&self) -> Vec<Vertex> {
        self.with_label(Label::U).collect()
    }

    pub fn m_vertices(&self) -> Vec<Vertex> {
        self.with_label(Label::M).collect()
    }

    pub fn i_vertices(&self) -> Vec<Vertex> {
        self.with_label(Label::I).collect()
    }

    pub fn m0_vertices(&self) -> Vec<Vertex> {
        self.graph
            .vertices()
            .filter(|&v| self.labels.is_m0(v))
            .collect()
    }

    pub fn m1_vertices(&self) -> Vec<Vertex> {
        self.graph
            .vertices()
            .filter(|&v| self.labels.is_m1(v))
            .collect()
    }

    pub fn u_count(&self) -> usize {
        self.with_label(Label::U).count()
    }

    pub fn u_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&y| self.labels.is_u(y))
    }

    /// Full scan of the three Basic Conditions.
    pub fn check_basic_conditions(&self) -> Result<(), BasicViolation> {
        for v in self.graph.vertices() {
            match self.labels.get(v) {
                Label::I => {
                    if let Some(&y) = self
                        .graph
                        .neighbors(v)
                        .iter()
                        .find(|&&y| self.labels.is_i(y))
                    {
                        return Err(BasicViolation::AdjacentI(v.min(y), v.max(y)));
                    }
                }
                Label::M => {
                    let m = self.labels.recount(&self.graph, v);
                    if m >= 2 {
                        return Err(BasicViolation::CrowdedM(v));
                    }
                    if m == 0 && self.u_neighbors(v).next().is_none() {
                        return Err(BasicViolation::StrandedM(v));
                    }
                }
                Label::U => {}
            }
        }
        Ok(())
    }

    /// Verifies the cached M-neighbor counts against a recount.
    pub fn check_caches(&self) -> Result<()> {
        for v in self.graph.vertices() {
            let want = self.labels.recount(&self.graph, v);
            if self.labels.m_count(v) != want {
                return Err(Error::Internal(format!(
                    "vertex {v}: cached M-neighbor count {} but recount gives {want}",
                    self.labels.m_count(v)
                )));
            }
        }
        Ok(())
    }

    /// Edges with both ends in M, i.e. the matching once U is empty.
    pub fn matched_edges(&self) -> Vec<Edge> {
        self.graph
            .edges()
            .filter(|e| self.labels.is_m(e.lo()) && self.labels.is_m(e.hi()))
            .collect()
    }

    /// Reads off the matching of a fully decided instance.
    pub fn final_answer(&self) -> Result<Option<Solution>> {
        if self.u_count() > 0 {
            return usage("final_answer needs an instance without undecided vertices");
        }
        if self.check_basic_conditions().is_err() {
            return Ok(None);
        }
        let edges: BTreeSet<Edge> = self.matched_edges().into_iter().collect();
        let total_weight = edges.iter().fold(Weight::zero(), |acc, e| {
            acc + self.graph.weight(e.lo(), e.hi())
        });
        Ok(Some(Solution {
            edges,
            total_weight,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_all_m_violates_condition_two() {
        let inst = Instance::with_labels(Graph::complete(3), &[0, 1, 2], &[]).unwrap();
        assert_eq!(inst.check_basic_conditions().unwrap_err().condition(), 2);
    }

    #[test]
    fn empty_instance_is_fine() {
        let inst = Instance::new(Graph::new(0));
        assert!(inst.check_basic_conditions().is_ok());
    }

    #[test]
    fn m_vertex_with_only_i_neighbors_violates_condition_three() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let inst = Instance::with_labels(g, &[0], &[1, 2]).unwrap();
        assert_eq!(
            inst.check_basic_conditions().unwrap_err(),
            BasicViolation::StrandedM(0)
        );
    }

    #[test]
    fn assign_updates_m_counts() {
        let g = Graph::path(3);
        let mut inst = Instance::with_labels(g, &[0], &[]).unwrap();
        assert!(inst.labels().is_m0(0));
        inst.assign(1, Label::M).unwrap();
        assert!(inst.labels().is_m1(0));
        assert!(inst.labels().is_m1(1));
        inst.assign(2, Label::I).unwrap();
        assert_eq!(inst.labels().m_count(2), 1);
        inst.check_caches().unwrap();
        assert!(matches!(inst.assign(2, Label::M), Err(Error::Usage(_))));
    }

    #[test]
    fn final_answers() {
        let inst = Instance::with_labels(Graph::path(2), &[0, 1], &[]).unwrap();
        let sol = inst.final_answer().unwrap().unwrap();
        assert_eq!(
            sol.edges.into_iter().collect::<Vec<_>>(),
            vec![Edge::new(0, 1)]
        );

        let inst = Instance::with_labels(Graph::new(3), &[], &[0, 1, 2]).unwrap();
        assert!(inst.final_answer().unwrap().unwrap().edges.is_empty());

        let inst = Instance::with_labels(Graph::new(1), &[0], &[]).unwrap();
        assert!(inst.final_answer().unwrap().is_none());

        let inst = Instance::new(Graph::path(2));
        assert!(matches!(inst.final_answer(), Err(Error::Usage(_))));
    }

    #[test]
    fn deletion_keeps_caches_exact() {
        let g = Graph::path(4);
        let mut inst = Instance::with_labels(g, &[1, 2], &[]).unwrap();
        inst.delete_vertices(&[1]).unwrap();
        inst.check_caches().unwrap();
        assert!(inst.labels().is_m0(2));
    }
}
