//! Mutable undirected simple graph used by the search.
//!
//! Vertices are dense integer ids that stay stable for the lifetime of a
//! graph: deletion only clears a liveness flag, and contraction allocates a
//! fresh id. Rewrite records can therefore cite vertex ids long after the
//! vertices themselves are gone.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Exact edge cost. Integer inputs stay integers under the additive
/// weight rewiring done by the structural rules.
pub type Weight = Rational64;

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(&self) -> Vertex {
        self.0
    }

    pub fn hi(&self) -> Vertex {
        self.1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(&self, v: Vertex) -> Option<Vertex> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Source of a distance layer: a single vertex or both ends of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Center {
    Vertex(Vertex),
    Edge(Vertex, Vertex),
}

/// Result of contracting a path into a fresh vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub vertex: Vertex,
    /// Outside neighbors inherited from the first path vertex.
    pub from_first: Vec<Vertex>,
    /// Outside neighbors inherited from the last path vertex.
    pub from_last: Vec<Vertex>,
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    alive: Vec<bool>,
    live: usize,
    edges: usize,
    weights: Option<HashMap<Edge, Weight>>,
}

impl Graph {
    /// Unweighted graph with vertices `0..n` and no edges.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            live: n,
            edges: 0,
            weights: None,
        }
    }

    /// Weighted graph with vertices `0..n` and no edges.
    pub fn new_weighted(n: usize) -> Self {
        Graph {
            weights: Some(HashMap::new()),
            ..Graph::new(n)
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_weighted_edges(n: usize, edges: &[(Vertex, Vertex, Weight)]) -> Result<Self> {
        let mut g = Graph::new_weighted(n);
        for &(u, v, w) in edges {
            g.add_weighted_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle needs n >= 3")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("valid clique")
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Upper bound (exclusive) on vertex ids ever allocated.
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.live
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn is_alive(&self, v: Vertex) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    /// Live vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter_map(|(v, &a)| if a { Some(v) } else { None })
    }

    /// Sorted neighbor list. Dead vertices have none.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        match self.adj.get(v) {
            Some(n) => n,
            None => &[],
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.is_alive(u) && self.adj[u].binary_search(&v).is_ok()
    }

    /// All live edges in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| Edge(u, v))
        })
    }

    /// Weight of an existing edge; zero in unweighted mode.
    pub fn weight(&self, u: Vertex, v: Vertex) -> Weight {
        match &self.weights {
            Some(w) => w
                .get(&Edge::new(u, v))
                .copied()
                .unwrap_or_else(Weight::zero),
            None => Weight::zero(),
        }
    }

    pub fn set_weight(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<()> {
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        if let Some(map) = &mut self.weights {
            map.insert(Edge::new(u, v), w);
        }
        Ok(())
    }

    pub fn shift_weight(&mut self, u: Vertex, v: Vertex, delta: Weight) -> Result<()> {
        let w = self.weight(u, v);
        self.set_weight(u, v, w + delta)
    }

    /// Drops all weights, turning this into an unweighted graph.
    pub fn clear_weights(&mut self) {
        self.weights = None;
    }

    /// Replaces every weight `w` by `-w`.
    pub fn negate_weights(&mut self) {
        if let Some(map) = &mut self.weights {
            for w in map.values_mut() {
                *w = -*w;
            }
        }
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.live += 1;
        self.adj.len() - 1
    }

    fn check_alive(&self, v: Vertex) -> Result<()> {
        if self.is_alive(v) {
            Ok(())
        } else {
            Err(Error::DeadVertex(v))
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.insert_edge(u, v, Weight::zero())
    }

    pub fn add_weighted_edge(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<()> {
        if !self.is_weighted() {
            return Err(Error::Usage(
                "weighted edge added to an unweighted graph".into(),
            ));
        }
        self.insert_edge(u, v, w)
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<()> {
        self.check_alive(u)?;
        self.check_alive(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let pos = match self.adj[u].binary_search(&v) {
            Ok(_) => return Err(Error::DuplicateEdge(u, v)),
            Err(p) => p,
        };
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        if let Some(map) = &mut self.weights {
            map.insert(Edge::new(u, v), w);
        }
        self.edges += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_alive(u)?;
        self.check_alive(v)?;
        let Ok(pos) = self.adj[u].binary_search(&v) else {
            return Err(Error::MissingEdge(u, v));
        };
        self.adj[u].remove(pos);
        let pos = self.adj[v].binary_search(&u).expect("symmetric adjacency");
        self.adj[v].remove(pos);
        if let Some(map) = &mut self.weights {
            map.remove(&Edge::new(u, v));
        }
        self.edges -= 1;
        Ok(())
    }

    /// Tombstones the given vertices together with their incident edges.
    pub fn delete_vertices(&mut self, vs: &[Vertex]) -> Result<()> {
        for &v in vs {
            self.check_alive(v)?;
        }
        for &v in vs {
            if !self.alive[v] {
                continue; // listed twice
            }
            let nbrs = std::mem::take(&mut self.adj[v]);
            for &x in &nbrs {
                if let Ok(pos) = self.adj[x].binary_search(&v) {
                    self.adj[x].remove(pos);
                }
                if let Some(map) = &mut self.weights {
                    map.remove(&Edge::new(v, x));
                }
            }
            self.edges -= nbrs.len();
            self.alive[v] = false;
            self.live -= 1;
        }
        Ok(())
    }

    /// Contracts the path `path[0] .. path[k-1]` into one fresh vertex that
    /// inherits the outside neighbors of both ends.
    ///
    /// In weighted mode the new edge to a former neighbor `a` of the first
    /// vertex weighs `w(first, a) + first_shift`; symmetrically for the last
    /// vertex. Inner path vertices must have no outside neighbors, the two
    /// ends must not be adjacent, and in weighted mode no outside vertex may
    /// neighbor both ends.
    pub fn contract_path(
        &mut self,
        path: &[Vertex],
        first_shift: Weight,
        last_shift: Weight,
    ) -> Result<Contraction> {
        if path.len() < 2 {
            return Err(Error::Usage(
                "contraction needs a path of at least two vertices".into(),
            ));
        }
        for &v in path {
            self.check_alive(v)?;
        }
        for pair in path.windows(2) {
            if !self.has_edge(pair[0], pair[1]) {
                return Err(Error::MissingEdge(pair[0], pair[1]));
            }
        }
        let inside: BTreeSet<Vertex> = path.iter().copied().collect();
        if inside.len() != path.len() {
            return Err(Error::Usage("contraction path repeats a vertex".into()));
        }
        let first = path[0];
        let last = *path.last().unwrap();
        if path.len() > 2 && self.has_edge(first, last) {
            return Err(Error::Precondition(format!(
                "path ends {first} and {last} are adjacent; contraction would create a self-loop"
            )));
        }
        for &mid in &path[1..path.len() - 1] {
            if self.adj[mid].iter().any(|x| !inside.contains(x)) {
                return Err(Error::Precondition(format!(
                    "inner path vertex {mid} has an outside neighbor"
                )));
            }
        }
        let from_first: Vec<Vertex> = self.adj[first]
            .iter()
            .copied()
            .filter(|x| !inside.contains(x))
            .collect();
        let from_last: Vec<Vertex> = self.adj[last]
            .iter()
            .copied()
            .filter(|x| !inside.contains(x))
            .collect();
        let shared = from_first
            .iter()
            .any(|x| from_last.binary_search(x).is_ok());
        if shared && self.is_weighted() {
            return Err(Error::Precondition(
                "an outside vertex neighbors both path ends; merged weights are ambiguous".into(),
            ));
        }
        let new_weights: Vec<(Vertex, Weight)> = from_first
            .iter()
            .map(|&a| (a, self.weight(first, a) + first_shift))
            .chain(
                from_last
                    .iter()
                    .map(|&b| (b, self.weight(last, b) + last_shift)),
            )
            .collect();
        self.delete_vertices(path)?;
        let v = self.add_vertex();
        for (x, w) in new_weights {
            if self.has_edge(v, x) {
                continue; // collapse parallel edge (unweighted mode only)
            }
            self.insert_edge(v, x, w)?;
        }
        Ok(Contraction {
            vertex: v,
            from_first,
            from_last,
        })
    }

    /// Copy keeping only `keep` alive; ids are preserved.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut mask = vec![false; self.capacity()];
        for &v in keep {
            if self.is_alive(v) {
                mask[v] = true;
            }
        }
        let mut g = Graph {
            adj: vec![Vec::new(); self.capacity()],
            alive: mask.clone(),
            live: mask.iter().filter(|&&b| b).count(),
            edges: 0,
            weights: self.weights.as_ref().map(|_| HashMap::new()),
        };
        for u in 0..self.capacity() {
            if !mask[u] {
                continue;
            }
            g.adj[u] = self.adj[u].iter().copied().filter(|&x| mask[x]).collect();
            for &x in &g.adj[u] {
                if u < x {
                    g.edges += 1;
                    if let (Some(dst), Some(src)) = (&mut g.weights, &self.weights) {
                        let e = Edge(u, x);
                        if let Some(w) = src.get(&e) {
                            dst.insert(e, *w);
                        }
                    }
                }
            }
        }
        g
    }

    /// Compacts live vertices to ids `0..n` (ascending order preserved).
    /// Returns the new graph and the old id of each new vertex.
    pub fn compacted(&self) -> (Graph, Vec<Vertex>) {
        let old: Vec<Vertex> = self.vertices().collect();
        let mut index = vec![usize::MAX; self.capacity()];
        for (i, &v) in old.iter().enumerate() {
            index[v] = i;
        }
        let mut g = if self.is_weighted() {
            Graph::new_weighted(old.len())
        } else {
            Graph::new(old.len())
        };
        for e in self.edges() {
            g.insert_edge(index[e.lo()], index[e.hi()], self.weight(e.lo(), e.hi()))
                .expect("compaction preserves simplicity");
        }
        (g, old)
    }

    /// Vertices at distance exactly `k` from a vertex, or from the nearer
    /// end of an edge.
    pub fn neighbors_k(&self, center: Center, k: usize) -> Result<BTreeSet<Vertex>> {
        let sources: Vec<Vertex> = match center {
            Center::Vertex(v) => {
                self.check_alive(v)?;
                vec![v]
            }
            Center::Edge(a, b) => {
                if !self.has_edge(a, b) {
                    return Err(Error::MissingEdge(a, b));
                }
                vec![a, b]
            }
        };
        Ok(self.layers(&sources, k).pop().unwrap_or_default())
    }

    /// BFS layers `N_0 .. N_k` from a source set.
    pub fn layers(&self, sources: &[Vertex], k: usize) -> Vec<BTreeSet<Vertex>> {
        let mut seen = vec![false; self.capacity()];
        let mut current: BTreeSet<Vertex> = BTreeSet::new();
        for &s in sources {
            seen[s] = true;
            current.insert(s);
        }
        let mut out = vec![current];
        for _ in 0..k {
            let mut next = BTreeSet::new();
            for &x in out.last().unwrap() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        next.insert(y);
                    }
                }
            }
            out.push(next);
        }
        out
    }

    /// A simple cycle of exactly `len` vertices through `u` whose vertices
    /// all satisfy `allowed`. Returns the lexicographically smallest such
    /// vertex sequence starting at `u`.
    pub fn find_small_cycle(
        &self,
        u: Vertex,
        len: usize,
        allowed: impl Fn(Vertex) -> bool,
    ) -> Option<Vec<Vertex>> {
        if !self.is_alive(u) || !(3..=6).contains(&len) || !allowed(u) {
            return None;
        }
        let mut path = vec![u];
        let mut on_path = vec![false; self.capacity()];
        on_path[u] = true;
        if self.cycle_dfs(len, &allowed, &mut path, &mut on_path) {
            Some(path)
        } else {
            None
        }
    }

    fn cycle_dfs(
        &self,
        len: usize,
        allowed: &impl Fn(Vertex) -> bool,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
    ) -> bool {
        let last = *path.last().unwrap();
        if path.len() == len {
            return self.has_edge(last, path[0]);
        }
        for &y in &self.adj[last] {
            if on_path[y] || !allowed(y) {
                continue;
            }
            path.push(y);
            on_path[y] = true;
            if self.cycle_dfs(len, allowed, path, on_path) {
                return true;
            }
            on_path[y] = false;
            path.pop();
        }
        false
    }

    /// Connected components of the subgraph induced by `restrict`, each
    /// sorted, ordered by smallest member.
    pub fn components(&self, restrict: &[Vertex]) -> Vec<Vec<Vertex>> {
        let mut inside = vec![false; self.capacity()];
        for &v in restrict {
            if self.is_alive(v) {
                inside[v] = true;
            }
        }
        let mut order: Vec<Vertex> = restrict.iter().copied().filter(|&v| inside[v]).collect();
        order.sort_unstable();
        order.dedup();
        let mut seen = vec![false; self.capacity()];
        let mut out = Vec::new();
        for &s in &order {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if inside[y] && !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn all_components(&self) -> Vec<Vec<Vertex>> {
        let all: Vec<Vertex> = self.vertices().collect();
        self.components(&all)
    }

    pub fn is_connected(&self) -> bool {
        self.all_components().len() <= 1
    }

    /// Full scan of the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let mut edges = 0;
        let mut live = 0;
        for v in 0..self.capacity() {
            if !self.alive[v] {
                if !self.adj[v].is_empty() {
                    return Err(Error::Internal(format!("dead vertex {v} keeps neighbors")));
                }
                continue;
            }
            live += 1;
            let nbrs = &self.adj[v];
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Internal(format!(
                    "neighbors of {v} unsorted or repeated"
                )));
            }
            for &x in nbrs {
                if x == v {
                    return Err(Error::SelfLoop(v));
                }
                if !self.is_alive(x) {
                    return Err(Error::Internal(format!("{v} adjacent to dead vertex {x}")));
                }
                if self.adj[x].binary_search(&v).is_err() {
                    return Err(Error::Internal(format!("asymmetric adjacency {v}->{x}")));
                }
                if v < x {
                    edges += 1;
                    if let Some(map) = &self.weights {
                        if !map.contains_key(&Edge(v, x)) {
                            return Err(Error::Internal(format!("edge {v}-{x} has no weight")));
                        }
                    }
                }
            }
        }
        if let Some(map) = &self.weights {
            for e in map.keys() {
                if !self.has_edge(e.lo(), e.hi()) {
                    return Err(Error::Internal(format!(
                        "weight stored for missing edge {e}"
                    )));
                }
            }
        }
        if edges != self.edges || live != self.live {
            return Err(Error::Internal(
                "cached vertex/edge counts are stale".into(),
            ));
        }
        Ok(())
    }
}
