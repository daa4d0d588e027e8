//! C ABI for the dominating induced matching solver.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Vertices are 0-indexed. Every function
//! that can fail returns a status code: [`DIM_OK`], [`DIM_NO`] for a
//! negative answer, or one of the negative `DIM_ERR_*` codes, after which
//! [`dim_last_error`] describes the problem.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dim_core::analysis::{branching_factor, Recurrence};
use dim_core::format::parse_graph;
use dim_core::graph::{Edge, Graph, Weight};
use dim_core::oracle::verify;
use dim_core::solve::{solve_with, Mode, Solution, SolveOptions};
use dim_core::Error;

/// Success; for `dim_solve`, a matching exists.
pub const DIM_OK: i32 = 0;
/// No dominating induced matching exists / the certificate is rejected.
pub const DIM_NO: i32 = 1;
/// A required pointer was null.
pub const DIM_ERR_NULL: i32 = -1;
/// Bad graph or certificate content (unknown vertex, duplicate edge, ...).
pub const DIM_ERR_INPUT: i32 = -2;
/// Text could not be parsed.
pub const DIM_ERR_PARSE: i32 = -3;
/// Bad argument, such as an unknown mode or an index out of range.
pub const DIM_ERR_USAGE: i32 = -4;
/// The solver detected an internal inconsistency.
pub const DIM_ERR_INTERNAL: i32 = -5;
/// A panic was caught at the boundary.
pub const DIM_ERR_PANIC: i32 = -6;

pub const DIM_MODE_DECIDE: i32 = 0;
pub const DIM_MODE_MINIMIZE: i32 = 1;
pub const DIM_MODE_MAXIMIZE: i32 = 2;

/// A graph under construction or ready to solve.
pub struct DimGraph {
    graph: Graph,
}

/// A dominating induced matching returned by `dim_solve`.
pub struct DimSolution {
    edges: Vec<Edge>,
    total: Weight,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(code: i32, msg: impl Into<String>) -> i32 {
    set_error(msg);
    code
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => DIM_ERR_PARSE,
        Error::Usage(_) | Error::Precondition(_) => DIM_ERR_USAGE,
        Error::Internal(_) => DIM_ERR_INTERNAL,
        _ => DIM_ERR_INPUT,
    }
}

fn from_error(e: Error) -> i32 {
    fail(code_of(&e), e.to_string())
}

/// Runs `f`, turning a panic into [`DIM_ERR_PANIC`].
fn guard(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            fail(DIM_ERR_PANIC, format!("panic: {msg}"))
        }
    }
}

/// Message for the last failing call on this thread; empty if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New unweighted graph with vertices `0..n` and no edges.
#[no_mangle]
pub extern "C" fn dim_graph_new(n: usize) -> *mut DimGraph {
    Box::into_raw(Box::new(DimGraph {
        graph: Graph::new(n),
    }))
}

/// New weighted graph with vertices `0..n`; add edges with
/// `dim_graph_add_weighted_edge`.
#[no_mangle]
pub extern "C" fn dim_graph_new_weighted(n: usize) -> *mut DimGraph {
    Box::into_raw(Box::new(DimGraph {
        graph: Graph::new_weighted(n),
    }))
}

/// # Safety
/// `g` must be null or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dim_graph_free(g: *mut DimGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn dim_graph_add_edge(g: *mut DimGraph, u: usize, v: usize) -> i32 {
    let Some(g) = g.as_mut() else {
        return fail(DIM_ERR_NULL, "graph is null");
    };
    if g.graph.is_weighted() {
        return fail(
            DIM_ERR_USAGE,
            "weighted graph needs dim_graph_add_weighted_edge",
        );
    }
    guard(|| match g.graph.add_edge(u, v) {
        Ok(()) => DIM_OK,
        Err(e) => from_error(e),
    })
}

/// Adds an edge of weight `num/den`.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn dim_graph_add_weighted_edge(
    g: *mut DimGraph,
    u: usize,
    v: usize,
    num: i64,
    den: i64,
) -> i32 {
    let Some(g) = g.as_mut() else {
        return fail(DIM_ERR_NULL, "graph is null");
    };
    if !g.graph.is_weighted() {
        return fail(
            DIM_ERR_USAGE,
            "unweighted graph; create it with dim_graph_new_weighted",
        );
    }
    if den == 0 {
        return fail(DIM_ERR_USAGE, "weight denominator is zero");
    }
    guard(
        || match g.graph.add_weighted_edge(u, v, Weight::new(num, den)) {
            Ok(()) => DIM_OK,
            Err(e) => from_error(e),
        },
    )
}

/// Parses the text format (`p dim n m`, `e u v [w]`, 1-indexed) into a
/// new graph stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dim_graph_parse(text: *const c_char, out: *mut *mut DimGraph) -> i32 {
    if text.is_null() || out.is_null() {
        return fail(DIM_ERR_NULL, "text or out is null");
    }
    *out = ptr::null_mut();
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return fail(DIM_ERR_PARSE, "input is not UTF-8");
    };
    guard(|| match parse_graph(text) {
        Ok(graph) => {
            *out = Box::into_raw(Box::new(DimGraph { graph }));
            DIM_OK
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn dim_graph_num_vertices(g: *const DimGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.num_vertices())
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn dim_graph_num_edges(g: *const DimGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.num_edges())
}

fn mode_of(mode: i32) -> Option<Mode> {
    match mode {
        DIM_MODE_DECIDE => Some(Mode::Decide),
        DIM_MODE_MINIMIZE => Some(Mode::Minimize),
        DIM_MODE_MAXIMIZE => Some(Mode::Maximize),
        _ => None,
    }
}

/// Solves `g` in the given mode with `threads` worker threads (0 or 1
/// means single-threaded). On [`DIM_OK`] `*out` holds a new solution;
/// on [`DIM_NO`] or an error it is set to null.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dim_solve(
    g: *const DimGraph,
    mode: i32,
    threads: usize,
    out: *mut *mut DimSolution,
) -> i32 {
    if g.is_null() || out.is_null() {
        return fail(DIM_ERR_NULL, "graph or out is null");
    }
    *out = ptr::null_mut();
    let Some(mode) = mode_of(mode) else {
        return fail(DIM_ERR_USAGE, format!("unknown mode {mode}"));
    };
    let g = &*g;
    guard(|| {
        let opts = SolveOptions {
            mode,
            threads: threads.max(1),
            ..SolveOptions::default()
        };
        match solve_with(&g.graph, &opts) {
            Ok((
                Some(Solution {
                    edges,
                    total_weight,
                }),
                _,
            )) => {
                *out = Box::into_raw(Box::new(DimSolution {
                    edges: edges.into_iter().collect(),
                    total: total_weight,
                }));
                DIM_OK
            }
            Ok((None, _)) => DIM_NO,
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a pointer returned by `dim_solve` and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dim_solution_free(s: *mut DimSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn dim_solution_num_edges(s: *const DimSolution) -> usize {
    s.as_ref().map_or(0, |s| s.edges.len())
}

/// Endpoints of the `i`-th matched edge, smaller id first.
///
/// # Safety
/// `s` must be a live solution handle; `u` and `v` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dim_solution_edge(
    s: *const DimSolution,
    i: usize,
    u: *mut usize,
    v: *mut usize,
) -> i32 {
    let (Some(s), false, false) = (s.as_ref(), u.is_null(), v.is_null()) else {
        return fail(DIM_ERR_NULL, "solution or output is null");
    };
    let Some(e) = s.edges.get(i) else {
        return fail(DIM_ERR_USAGE, format!("edge index {i} out of range"));
    };
    *u = e.lo();
    *v = e.hi();
    DIM_OK
}

/// Total weight as a reduced fraction `num/den` (`den > 0`); zero in
/// decide mode.
///
/// # Safety
/// `s` must be a live solution handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dim_solution_weight(
    s: *const DimSolution,
    num: *mut i64,
    den: *mut i64,
) -> i32 {
    let (Some(s), false, false) = (s.as_ref(), num.is_null(), den.is_null()) else {
        return fail(DIM_ERR_NULL, "solution or output is null");
    };
    *num = *s.total.numer();
    *den = *s.total.denom();
    DIM_OK
}

/// Checks whether the `k` edges `(us[i], vs[i])` form a dominating induced
/// matching of `g`: [`DIM_OK`] if so, [`DIM_NO`] if not.
///
/// # Safety
/// `g` must be a live graph handle; `us` and `vs` must point to `k`
/// elements each (they may be null when `k == 0`).
#[no_mangle]
pub unsafe extern "C" fn dim_verify(
    g: *const DimGraph,
    us: *const usize,
    vs: *const usize,
    k: usize,
) -> i32 {
    let Some(g) = g.as_ref() else {
        return fail(DIM_ERR_NULL, "graph is null");
    };
    if k > 0 && (us.is_null() || vs.is_null()) {
        return fail(DIM_ERR_NULL, "edge arrays are null");
    }
    let (us, vs) = if k == 0 {
        (&[][..], &[][..])
    } else {
        (
            std::slice::from_raw_parts(us, k),
            std::slice::from_raw_parts(vs, k),
        )
    };
    guard(|| {
        let mut set = BTreeSet::new();
        for (&u, &v) in us.iter().zip(vs) {
            if u == v {
                return fail(DIM_ERR_INPUT, format!("edge {u}-{v} is a loop"));
            }
            set.insert(Edge::new(u, v));
        }
        match verify(&g.graph, &set) {
            Ok(true) => DIM_OK,
            Ok(false) => fail(DIM_NO, "not a dominating induced matching"),
            Err(e) => from_error(e),
        }
    })
}

/// Branching factor of the recurrence with the given `len` decrements.
///
/// # Safety
/// `decrements` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dim_branching_factor(
    decrements: *const u32,
    len: usize,
    out: *mut f64,
) -> i32 {
    if decrements.is_null() || out.is_null() {
        return fail(DIM_ERR_NULL, "decrements or out is null");
    }
    let ds = std::slice::from_raw_parts(decrements, len).to_vec();
    match Recurrence::new(ds) {
        Ok(r) => {
            *out = branching_factor(&r);
            DIM_OK
        }
        Err(e) => from_error(e),
    }
}
