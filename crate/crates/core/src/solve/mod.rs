//! Recursive branch-and-reduce driver.

mod base;
mod bounds;
mod reconstruct;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::branch::{select_branch_vertex, BranchChoice, Step};
use crate::error::{internal, usage, Error, Result};
use crate::graph::{Edge, Graph, Weight};
use crate::instance::{Instance, Label};
use crate::oracle::verify;
use crate::reduce::{
    apply_structural_rules, make_pseudo_feasible, strip_decided, Pseudo, RuleCounts,
};

pub use base::solve_base;
pub use bounds::{required_elimination, BoundViolation, EliminationTally};
pub use reconstruct::reconstruct;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Decide,
    Minimize,
    Maximize,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "decide" => Ok(Mode::Decide),
            "min" | "minimize" => Ok(Mode::Minimize),
            "max" | "maximize" => Ok(Mode::Maximize),
            _ => usage(format!("unknown mode {s:?} (expected decide, min or max)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Decide => "decide",
            Mode::Minimize => "min",
            Mode::Maximize => "max",
        })
    }
}

/// A dominating induced matching and its weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    pub edges: BTreeSet<Edge>,
    pub total_weight: Weight,
}

impl Solution {
    fn absorb(&mut self, other: Solution) {
        self.edges.extend(other.edges);
        self.total_weight += other.total_weight;
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub mode: Mode,
    /// Worker threads for exploring sibling branches; 1 means sequential.
    pub threads: usize,
    /// Measure eliminated U-vertices at every branch and record bound
    /// violations. Costs two extra reductions per branch.
    pub check_bounds: bool,
    /// Stack size of the solver thread(s); recursion depth is at most the
    /// number of vertices.
    pub stack_size: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: Mode::Decide,
            threads: 1,
            check_bounds: false,
            stack_size: 256 << 20,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub leaves: u64,
    pub max_depth: usize,
    pub rule_counts: RuleCounts,
    pub branch_counts: BTreeMap<Step, u64>,
    /// Empirical eliminated-U counts per branch case (bound checking only).
    pub eliminated: BTreeMap<Step, EliminationTally>,
    pub violations: Vec<BoundViolation>,
    pub wall_time_ms: f64,
}

impl SolveStats {
    pub fn merge(&mut self, other: SolveStats) {
        self.nodes += other.nodes;
        self.leaves += other.leaves;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.rule_counts.merge(&other.rule_counts);
        for (k, v) in other.branch_counts {
            *self.branch_counts.entry(k).or_default() += v;
        }
        for (k, v) in other.eliminated {
            self.eliminated.entry(k).or_default().merge(&v);
        }
        self.violations.extend(other.violations);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

/// Solves with default options.
pub fn solve(g: &Graph, mode: Mode) -> Result<(Option<Solution>, SolveStats)> {
    solve_with(
        g,
        &SolveOptions {
            mode,
            ..SolveOptions::default()
        },
    )
}

/// Decides or optimizes over dominating induced matchings of `g`.
///
/// Decide mode ignores weights. The returned solution has been checked
/// against `g` and its weight recomputed from the original weights.
pub fn solve_with(g: &Graph, opts: &SolveOptions) -> Result<(Option<Solution>, SolveStats)> {
    let start = Instant::now();
    g.validate().map_err(|e| Error::Input(e.to_string()))?;
    if opts.mode != Mode::Decide && !g.is_weighted() {
        return Err(Error::Input(format!(
            "mode {} needs edge weights",
            opts.mode
        )));
    }
    let mut work = g.clone();
    match opts.mode {
        Mode::Decide => work.clear_weights(),
        Mode::Minimize => {}
        Mode::Maximize => work.negate_weights(),
    }
    let ctx = Ctx {
        optimize: opts.mode != Mode::Decide,
        check_bounds: opts.check_bounds,
        parallel_depth: if opts.threads > 1 { PARALLEL_DEPTH } else { 0 },
    };
    let root = Instance::new(work);
    let run = || {
        let mut stats = SolveStats::default();
        let found = solve_node(&ctx, root, 0, &mut stats);
        (found, stats)
    };
    let (found, mut stats) = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .stack_size(opts.stack_size)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        pool.install(run)
    } else {
        std::thread::scope(|s| {
            std::thread::Builder::new()
                .name("dim-solver".into())
                .stack_size(opts.stack_size)
                .spawn_scoped(s, run)
                .map_err(Error::Io)
                .map(|h| h.join().expect("solver thread panicked"))
        })?
    };
    let found = found?;
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let Some(sol) = found else {
        return Ok((None, stats));
    };
    if !verify(g, &sol.edges)? {
        return internal("reconstructed edge set is not a dominating induced matching");
    }
    let total: Weight = sol
        .edges
        .iter()
        .fold(Weight::zero(), |acc, e| acc + g.weight(e.lo(), e.hi()));
    let expected = match opts.mode {
        Mode::Decide => None,
        Mode::Minimize => Some(sol.total_weight),
        Mode::Maximize => Some(-sol.total_weight),
    };
    if expected.is_some_and(|w| w != total) {
        return internal(format!(
            "lifted weight {} disagrees with recomputed weight {total}",
            expected.unwrap()
        ));
    }
    Ok((
        Some(Solution {
            edges: sol.edges,
            total_weight: total,
        }),
        stats,
    ))
}

/// Branch depth below which siblings are solved on separate workers.
const PARALLEL_DEPTH: usize = 12;

struct Ctx {
    optimize: bool,
    check_bounds: bool,
    parallel_depth: usize,
}

fn solve_node(
    ctx: &Ctx,
    mut inst: Instance,
    depth: usize,
    stats: &mut SolveStats,
) -> Result<Option<Solution>> {
    stats.nodes += 1;
    stats.max_depth = stats.max_depth.max(depth);
    let entry = cfg!(debug_assertions).then(|| inst.graph.clone());
    let found = loop {
        if inst.u_count() <= 6 || inst.graph.max_degree() <= 2 {
            stats.leaves += 1;
            break solve_base(&inst, ctx.optimize)?;
        }
        match make_pseudo_feasible(&mut inst, &mut stats.rule_counts) {
            Pseudo::Infeasible => {
                stats.leaves += 1;
                break None;
            }
            Pseudo::Changed => continue,
            Pseudo::Unchanged => {}
        }
        if strip_decided(&mut inst, &mut stats.rule_counts)? {
            continue;
        }
        let comps = inst.graph.all_components();
        if comps.len() > 1 {
            break decompose(ctx, &inst, &comps, depth, stats)?;
        }
        if apply_structural_rules(&mut inst, &mut stats.rule_counts)?.is_some() {
            continue;
        }
        let choice = select_branch_vertex(&inst)?;
        break branch(ctx, &inst, choice, depth, stats)?;
    };
    let Some(sol) = found else {
        return Ok(None);
    };
    let lifted = reconstruct(&inst.trace, sol)?;
    if let Some(entry) = entry {
        let total = lifted.edges.iter().try_fold(Weight::zero(), |acc, e| {
            if entry.has_edge(e.lo(), e.hi()) {
                Ok(acc + entry.weight(e.lo(), e.hi()))
            } else {
                Err(Error::Internal(format!(
                    "lifted edge {e} is not in the graph"
                )))
            }
        })?;
        if total != lifted.total_weight {
            return internal(format!(
                "lifted weight {} but edges weigh {total}",
                lifted.total_weight
            ));
        }
    }
    Ok(Some(lifted))
}

/// Solves each component separately; all must succeed.
fn decompose(
    ctx: &Ctx,
    inst: &Instance,
    comps: &[Vec<usize>],
    depth: usize,
    stats: &mut SolveStats,
) -> Result<Option<Solution>> {
    let mut all = Solution::default();
    for comp in comps {
        match solve_node(ctx, inst.restricted(comp), depth, stats)? {
            Some(sol) => all.absorb(sol),
            None => return Ok(None),
        }
    }
    Ok(Some(all))
}

fn branch(
    ctx: &Ctx,
    inst: &Instance,
    choice: BranchChoice,
    depth: usize,
    stats: &mut SolveStats,
) -> Result<Option<Solution>> {
    *stats.branch_counts.entry(choice.step).or_default() += 1;
    if ctx.check_bounds {
        bounds::check(inst, &choice, stats)?;
    }
    let mut to_m = inst.fork();
    to_m.assign(choice.vertex, Label::M)?;
    let mut to_i = inst.fork();
    to_i.assign(choice.vertex, Label::I)?;

    if depth < ctx.parallel_depth {
        let child = |c: Instance| {
            let mut s = SolveStats::default();
            let r = solve_node(ctx, c, depth + 1, &mut s);
            (r, s)
        };
        let ((a, sa), (b, sb)) = rayon::join(|| child(to_m), || child(to_i));
        stats.merge(sa);
        stats.merge(sb);
        return Ok(better(ctx, a?, b?));
    }
    let a = solve_node(ctx, to_m, depth + 1, stats)?;
    if !ctx.optimize && a.is_some() {
        return Ok(a);
    }
    let b = solve_node(ctx, to_i, depth + 1, stats)?;
    Ok(better(ctx, a, b))
}

/// Lighter of two results; the M-branch wins ties.
fn better(ctx: &Ctx, a: Option<Solution>, b: Option<Solution>) -> Option<Solution> {
    match (a, b) {
        (Some(a), Some(b)) if ctx.optimize && b.total_weight < a.total_weight => Some(b),
        (Some(a), _) => Some(a),
        (None, b) => b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(g: &Graph) -> Graph {
        let mut w = Graph::new_weighted(g.capacity());
        for e in g.edges() {
            w.add_weighted_edge(e.lo(), e.hi(), Weight::from_integer(1))
                .unwrap();
        }
        w
    }

    #[test]
    fn tiny_graphs() {
        let (s, _) = solve(&Graph::path(2), Mode::Decide).unwrap();
        assert_eq!(s.unwrap().edges.len(), 1);
        assert!(solve(&Graph::cycle(4), Mode::Decide).unwrap().0.is_none());
        assert!(solve(&Graph::complete(4), Mode::Decide)
            .unwrap()
            .0
            .is_none());
        assert!(solve(&Graph::new(5), Mode::Decide)
            .unwrap()
            .0
            .unwrap()
            .edges
            .is_empty());
    }

    #[test]
    fn c6_minimum_is_two() {
        let (s, _) = solve(&unit(&Graph::cycle(6)), Mode::Minimize).unwrap();
        let s = s.unwrap();
        assert_eq!(s.total_weight, Weight::from_integer(2));
        assert_eq!(s.edges.len(), 2);
    }

    #[test]
    fn optimization_needs_weights() {
        assert!(matches!(
            solve(&Graph::path(2), Mode::Minimize),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn long_cycles_follow_divisibility() {
        for n in 3..40 {
            let found = solve(&Graph::cycle(n), Mode::Decide).unwrap().0.is_some();
            assert_eq!(found, n % 3 == 0, "C{n}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = Graph::cycle(30);
        let opts = SolveOptions {
            threads: 4,
            ..SolveOptions::default()
        };
        assert!(solve_with(&g, &opts).unwrap().0.is_some());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("min".parse::<Mode>().unwrap(), Mode::Minimize);
        assert!("best".parse::<Mode>().is_err());
    }
}
