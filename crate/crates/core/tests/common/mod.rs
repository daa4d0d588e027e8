//! Shared generators and independent checks for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dim_core::branch::select_branch_vertex;
use dim_core::gen::{gen_gnp, gen_planted, gen_regular, with_random_weights};
use dim_core::graph::{Edge, Graph, Vertex, Weight};
use dim_core::instance::{Instance, Label};
use dim_core::oracle::{brute_force_labeled, verify};
use dim_core::reduce::{
    apply_site, find_site, make_pseudo_feasible, reduce_to_fixpoint, strip_decided, Pseudo,
    Reduction, Rule, RuleCounts, Site, STRUCTURAL_RULES,
};
use dim_core::solve::{reconstruct, Mode, Solution};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Graph on 6 vertices whose edges are the set bits of `mask` (15 pairs).
pub fn six_vertex_graph(mask: u32) -> Graph {
    let mut g = Graph::new(6);
    let mut bit = 0;
    for u in 0..6 {
        for v in u + 1..6 {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

/// The mixed corpus for randomized differential runs: `G(n,p)` with
/// assorted `p`, cubic graphs, and planted yes-instances, `7 <= n <= 14`.
pub fn mixed_graph(seed: u64) -> Graph {
    let mut r = rng(seed ^ 0x5eed);
    let n = r.gen_range(7..=14);
    match seed % 3 {
        0 => {
            let p = [0.15, 0.25, 0.35, 0.5][r.gen_range(0..4)];
            gen_gnp(n, p, seed).unwrap()
        }
        1 => {
            let n = if n % 2 == 1 { n + 1 } else { n };
            gen_regular(n.min(14), 3, seed).unwrap()
        }
        _ => {
            let m = 2 * r.gen_range(2..=n / 2);
            let p = [0.2, 0.35, 0.5][r.gen_range(0..3)];
            gen_planted(m, n - m, p, seed).unwrap().graph
        }
    }
}

pub fn weighted(g: &Graph, seed: u64) -> Graph {
    with_random_weights(g, -10, 10, seed).unwrap()
}

/// Sum of the original weights of `edges`.
pub fn weight_of(g: &Graph, edges: &BTreeSet<Edge>) -> Weight {
    edges.iter().map(|e| g.weight(e.lo(), e.hi())).sum()
}

/// Whether `edges` is a dominating induced matching of the instance's graph
/// that covers every M-vertex and no I-vertex.
pub fn respects_labels(inst: &Instance, edges: &BTreeSet<Edge>) -> bool {
    let g = inst.graph();
    if !edges.iter().all(|e| g.has_edge(e.lo(), e.hi())) || !verify(g, edges).unwrap() {
        return false;
    }
    let covered: BTreeSet<Vertex> = edges.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
    g.vertices().all(|v| match inst.label(v) {
        Label::M => covered.contains(&v),
        Label::I => !covered.contains(&v),
        Label::U => true,
    })
}

/// Random labels on a graph: each vertex M with probability `pm`, else I
/// with probability `pi`, skipping assignments that would put two
/// I-vertices side by side.
pub fn random_labels(g: Graph, pm: f64, pi: f64, r: &mut impl Rng) -> Instance {
    let mut inst = Instance::new(g);
    let vs: Vec<Vertex> = inst.graph().vertices().collect();
    for v in vs {
        let x: f64 = r.gen();
        if x < pm {
            inst.assign(v, Label::M).unwrap();
        } else if x < pm + pi
            && !inst
                .graph()
                .neighbors(v)
                .iter()
                .any(|&y| inst.label(y) == Label::I)
        {
            inst.assign(v, Label::I).unwrap();
        }
    }
    inst
}

/// One rule application met while reducing: the state just before it and
/// the site that matched.
pub struct Encounter {
    pub before: Instance,
    pub site: Site,
}

/// Reduces the way the solver does (forced moves and reducibility commits,
/// stripping, splitting into components, rewriting in fixed order) and
/// hands every rewriting step to `visit`.
pub fn walk_rules(inst: Instance, visit: &mut impl FnMut(Encounter)) {
    let mut stack = vec![inst];
    let mut counts = RuleCounts::default();
    while let Some(mut inst) = stack.pop() {
        loop {
            match make_pseudo_feasible(&mut inst, &mut counts) {
                Pseudo::Infeasible => break,
                Pseudo::Changed => continue,
                Pseudo::Unchanged => {}
            }
            if strip_decided(&mut inst, &mut counts).unwrap() {
                continue;
            }
            let comps = inst.graph().all_components();
            if comps.len() > 1 {
                stack.extend(comps.iter().map(|c| inst.restricted(c)));
                break;
            }
            let mut applied = false;
            for rule in STRUCTURAL_RULES {
                if let Some(site) = find_site(&inst, rule).unwrap() {
                    let before = inst.fork();
                    apply_site(&mut inst, &site).unwrap();
                    visit(Encounter { before, site });
                    applied = true;
                    break;
                }
            }
            if !applied {
                break;
            }
        }
    }
}

/// Checks one rule application against brute force: same feasibility, and
/// the optimum after the rewrite, lifted back, is a valid solution before
/// it with the same optimal total. Decide mode skips the totals.
pub fn check_encounter(e: &Encounter, mode: Mode) -> Result<(), String> {
    let mut after = e.before.fork();
    apply_site(&mut after, &e.site).map_err(|x| x.to_string())?;
    let want = brute_force_labeled(&e.before, mode).map_err(|x| x.to_string())?;
    let got = brute_force_labeled(&after, mode).map_err(|x| x.to_string())?;
    match (want, got) {
        (None, None) => Ok(()),
        (Some(_), None) => Err(format!("{:?}: feasible before, infeasible after", e.site)),
        (None, Some(_)) => Err(format!("{:?}: infeasible before, feasible after", e.site)),
        (Some(w), Some(g)) => {
            let lifted = reconstruct(after.trace(), g).map_err(|x| x.to_string())?;
            if !respects_labels(&e.before, &lifted.edges) {
                return Err(format!(
                    "{:?}: lifted edges {:?} are not a solution",
                    e.site, lifted.edges
                ));
            }
            if mode == Mode::Decide {
                return Ok(());
            }
            let real = weight_of(e.before.graph(), &lifted.edges);
            if real != lifted.total_weight {
                return Err(format!(
                    "{:?}: lifted total {} but edges weigh {real}",
                    e.site, lifted.total_weight
                ));
            }
            if real != w.total_weight {
                return Err(format!(
                    "{:?}: optimum {} before, lifted optimum {real} after",
                    e.site, w.total_weight
                ));
            }
            Ok(())
        }
    }
}

/// Core edges, M vertices, degree-locked vertices, core size.
type Gadget = (Vec<(usize, usize)>, Vec<usize>, Vec<usize>, usize);

/// Random instance built around the shape a rule looks for, padded with
/// random extra vertices; at most 14 vertices. The rule is not guaranteed
/// to be the one that fires.
pub fn rule_gadget(rule: Rule, r: &mut impl Rng, weights: bool) -> Instance {
    let extra = r.gen_range(2..=9);
    // core vertices, which of them are M, and which must keep their degree
    let (core_edges, m_core, locked, n_core): Gadget = match rule {
        Rule::TriangleEdge => (vec![(0, 1), (0, 2), (1, 2)], vec![0], vec![0], 3),
        Rule::FiveCycleEdge => (
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
            vec![0],
            vec![0],
            5,
        ),
        Rule::SixCycle => (
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)],
            vec![1, 4],
            vec![0, 1, 2],
            6,
        ),
        Rule::Chain => (vec![(0, 1), (1, 2), (2, 3)], vec![0, 3], vec![1, 2], 4),
        Rule::Tail => {
            // u with 2..=4 neighbors, some inner edges, one leaves
            let k = r.gen_range(2..=4);
            let mut es: Vec<(usize, usize)> = (1..=k).map(|v| (0, v)).collect();
            for a in 1..=k {
                for b in a + 1..=k {
                    if r.gen_bool(0.3) {
                        es.push((a, b));
                    }
                }
            }
            es.push((1, k + 1));
            let locked: Vec<usize> = (0..=k).collect();
            (es, vec![0], locked, k + 2)
        }
        _ => {
            let k = r.gen_range(1..=4);
            let mut es: Vec<(usize, usize)> = (1..=k).map(|v| (0, v)).collect();
            for a in 1..=k {
                for b in a + 1..=k {
                    if r.gen_bool(0.4) {
                        es.push((a, b));
                    }
                }
            }
            (es, vec![0], (0..=k).collect(), k + 1)
        }
    };
    let n = (n_core + extra).min(14);
    let mut pairs: BTreeSet<(usize, usize)> = core_edges.into_iter().collect();
    let p = r.gen_range(0.08..0.3);
    for u in 0..n {
        for v in u + 1..n {
            if locked.contains(&u) || locked.contains(&v) || pairs.contains(&(u, v)) {
                continue;
            }
            // at least one endpoint outside the core keeps the shape intact
            if (u >= n_core || v >= n_core) && r.gen_bool(p) {
                pairs.insert((u, v));
            }
        }
    }
    // shuffle ids so the anchor is not always vertex 0
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(r);
    let mut g = if weights {
        Graph::new_weighted(n)
    } else {
        Graph::new(n)
    };
    for (u, v) in pairs {
        if weights {
            g.add_weighted_edge(ids[u], ids[v], Weight::from_integer(r.gen_range(-10..=10)))
                .unwrap();
        } else {
            g.add_edge(ids[u], ids[v]).unwrap();
        }
    }
    let mut inst = Instance::new(g);
    for v in m_core {
        inst.assign(ids[v], Label::M).unwrap();
    }
    // a few more random commitments on the padding
    for &v in &ids[n_core..n] {
        if r.gen_bool(0.15) {
            inst.assign(v, Label::M).unwrap();
        }
    }
    inst
}

/// Solution total under the graph's own weights, for comparisons.
pub fn total(g: &Graph, s: &Solution) -> Weight {
    weight_of(g, &s.edges)
}

/// A split of `0..n` into matched pairs and an independent rest.
fn random_split(n: usize, r: &mut impl Rng) -> (Vec<Option<usize>>, Vec<(usize, usize)>) {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(r);
    let pairs = r.gen_range(1..=n / 2);
    let mut partner = vec![None; n];
    let mut edges = Vec::new();
    for c in ids[..2 * pairs].chunks(2) {
        partner[c[0]] = Some(c[1]);
        partner[c[1]] = Some(c[0]);
        edges.push((c[0].min(c[1]), c[0].max(c[1])));
    }
    (partner, edges)
}

fn edge_fits(partner: &[Option<usize>], u: usize, v: usize) -> bool {
    match (partner[u], partner[v]) {
        (None, None) => false,
        (Some(a), Some(_)) => a == v,
        _ => true,
    }
}

/// Instance with (at least) two planted solutions: only edges compatible
/// with both splits are drawn. Vertices matched in both may be committed
/// to M, vertices independent in both to I.
pub fn two_solution_instance(
    n: usize,
    p: f64,
    commit: f64,
    r: &mut impl Rng,
    weights: bool,
) -> Instance {
    loop {
        let (pa, ea) = random_split(n, r);
        let (pb, eb) = random_split(n, r);
        let required: BTreeSet<(usize, usize)> = ea.into_iter().chain(eb).collect();
        if !required
            .iter()
            .all(|&(u, v)| edge_fits(&pa, u, v) && edge_fits(&pb, u, v))
        {
            continue;
        }
        let mut g = if weights {
            Graph::new_weighted(n)
        } else {
            Graph::new(n)
        };
        for u in 0..n {
            for v in u + 1..n {
                let fits = edge_fits(&pa, u, v) && edge_fits(&pb, u, v);
                if required.contains(&(u, v)) || (fits && r.gen_bool(p)) {
                    let w = Weight::from_integer(if weights { r.gen_range(-10..=10) } else { 1 });
                    if weights {
                        g.add_weighted_edge(u, v, w).unwrap();
                    } else {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
        }
        let mut inst = Instance::new(g);
        for v in 0..n {
            if !r.gen_bool(commit) {
                continue;
            }
            match (pa[v], pb[v]) {
                (Some(_), Some(_)) => inst.assign(v, Label::M).unwrap(),
                (None, None) => inst.assign(v, Label::I).unwrap(),
                _ => {}
            }
        }
        return inst;
    }
}

/// Applications checked per rule, split by (rule, weighted), and any
/// mismatches found.
#[derive(Default)]
pub struct Sweep {
    pub checked: std::collections::BTreeMap<(Rule, bool), usize>,
    pub failures: Vec<String>,
}

impl Sweep {
    pub fn least(&self) -> usize {
        STRUCTURAL_RULES
            .iter()
            .flat_map(|&r| [(r, false), (r, true)])
            .map(|k| self.checked.get(&k).copied().unwrap_or(0))
            .min()
            .unwrap_or(0)
    }
}

/// Checks rule applications from three sources (two-solution instances,
/// rule-shaped gadgets, randomly labeled `G(n,p)`) until every rule has
/// been checked `per_rule` times in decide and in weighted mode, or the
/// seed budget runs out.
pub fn rule_sweep(per_rule: usize, budget: u64) -> Sweep {
    let mut sweep = Sweep::default();
    for seed in 0..budget {
        if sweep.least() >= per_rule {
            break;
        }
        let mut r = rng(seed);
        let weights = seed % 2 == 0;
        let n = r.gen_range(6..=14);
        let inst = match seed % 4 {
            0 | 1 => {
                let p = [0.3, 0.6, 0.9][r.gen_range(0..3)];
                two_solution_instance(n, p, 0.2, &mut r, weights)
            }
            2 => {
                let target = STRUCTURAL_RULES[(seed / 4) as usize % STRUCTURAL_RULES.len()];
                rule_gadget(target, &mut r, weights)
            }
            _ => {
                let g = gen_gnp(n, r.gen_range(0.15..0.5), seed).unwrap();
                let g = if weights { weighted(&g, seed) } else { g };
                random_labels(g, 0.2, 0.05, &mut r)
            }
        };
        let mode = if weights {
            Mode::Minimize
        } else {
            Mode::Decide
        };
        walk_rules(inst, &mut |e| {
            if let Err(msg) = check_encounter(&e, mode) {
                sweep.failures.push(format!("seed {seed}: {msg}"));
            }
            *sweep.checked.entry((e.site.rule(), weights)).or_insert(0) += 1;
        });
    }
    sweep
}

/// Graphs for the search-tree dives, `12 <= n <= 40`: regular graphs of
/// degree 3 to 5 (where the search actually branches), two-solution
/// graphs, and `G(n,p)`.
pub fn dive_graph(seed: u64) -> Graph {
    let mut r = rng(seed ^ 0x57);
    let n = r.gen_range(6..=20) * 2;
    match seed % 6 {
        0..=2 => gen_regular(n, 3, seed).unwrap(),
        3 => gen_regular(n, r.gen_range(4..=5), seed).unwrap(),
        4 => {
            let inst = two_solution_instance(n, r.gen_range(0.3..0.9), 0.0, &mut r, false);
            inst.graph().clone()
        }
        _ => gen_gnp(n, r.gen_range(0.1..0.3), seed).unwrap(),
    }
}

/// One random root-to-leaf path of the search tree: reduce, split off a
/// component, let the solver's selection pick a vertex, commit it to a
/// random side, repeat. `visit` sees every reduced component.
pub fn dive(g: Graph, seed: u64, visit: &mut impl FnMut(&Instance)) {
    let mut r = rng(seed ^ 0xd1fe);
    let mut inst = Instance::new(g);
    let mut counts = RuleCounts::default();
    loop {
        if reduce_to_fixpoint(&mut inst, &mut counts).unwrap() == Reduction::Infeasible {
            return;
        }
        let comps: Vec<Instance> = inst
            .graph()
            .all_components()
            .iter()
            .map(|c| inst.restricted(c))
            .collect();
        comps.iter().for_each(&mut *visit);
        let open: Vec<Instance> = comps
            .into_iter()
            .filter(|c| c.u_count() > 6 && c.graph().max_degree() > 2)
            .collect();
        let Some(next) = open.choose(&mut r) else {
            return;
        };
        let choice = select_branch_vertex(next).unwrap();
        inst = next.fork();
        let label = if r.gen_bool(0.5) { Label::M } else { Label::I };
        inst.assign(choice.vertex, label).unwrap();
    }
}

/// Tally of reduced-structure checks.
#[derive(Default, Debug)]
pub struct StructureTally {
    pub checked: usize,
    /// Reduced instances that still have both M- and U-vertices.
    pub nontrivial: usize,
    pub failures: Vec<String>,
}

/// Reduces instances until `want` reduced ones have been checked: two-solution
/// instances with a few commitments, and search-tree dives on `dive_graph`.
pub fn structure_sweep(want: usize) -> StructureTally {
    let mut t = StructureTally::default();
    let mut seed = 0u64;
    while t.checked < want {
        let check = |inst: &Instance, t: &mut StructureTally| {
            if let Err(v) = dim_core::reduce::check_reduced_structure(inst) {
                t.failures.push(format!("seed {seed}: {v}"));
            }
            if !inst.i_vertices().is_empty() || !inst.m1_vertices().is_empty() {
                t.failures
                    .push(format!("seed {seed}: decided vertices survived"));
            }
            t.checked += 1;
            t.nontrivial += usize::from(!inst.m_vertices().is_empty() && inst.u_count() > 0);
        };
        if seed.is_multiple_of(2) {
            let mut r = rng(seed);
            let n = r.gen_range(6..=40);
            let p = [0.3, 0.45, 0.6][r.gen_range(0..3)];
            let mut inst = two_solution_instance(n, p, 0.05, &mut r, false);
            let mut counts = RuleCounts::default();
            match reduce_to_fixpoint(&mut inst, &mut counts) {
                Ok(Reduction::Reduced) => {
                    for c in inst.graph().all_components() {
                        check(&inst.restricted(&c), &mut t);
                    }
                    if inst.graph().num_vertices() == 0 {
                        check(&inst, &mut t);
                    }
                }
                Ok(Reduction::Infeasible) => t
                    .failures
                    .push(format!("seed {seed}: planted instance called infeasible")),
                Err(e) => t.failures.push(format!("seed {seed}: {e}")),
            }
        } else {
            dive(dive_graph(seed), seed, &mut |inst| check(inst, &mut t));
        }
        seed += 1;
    }
    t
}
