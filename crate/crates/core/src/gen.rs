//! Seeded instance generators.
//!
//! All generators draw from ChaCha8 seeded with `seed_from_u64`, so a seed
//! names the same graph on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{usage, Result};
use crate::graph::{Edge, Graph, Vertex, Weight};

/// A generated yes-instance together with the matching it was built around.
#[derive(Clone, Debug)]
pub struct Planted {
    pub graph: Graph,
    pub certificate: Vec<Edge>,
}

/// Attempts at drawing a connected planted graph before settling.
const PLANTED_ATTEMPTS: usize = 64;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        usage(format!("edge probability {p} is outside [0, 1]"))
    }
}

/// Perfect matching on `n_matched` vertices plus an independent set of
/// `n_independent`, with each cross edge present with probability `p`.
///
/// Vertex ids are shuffled. Draws are repeated until the graph is connected,
/// giving up after a fixed number of attempts and returning the last draw.
pub fn gen_planted(n_matched: usize, n_independent: usize, p: f64, seed: u64) -> Result<Planted> {
    if !n_matched.is_multiple_of(2) {
        return usage(format!("matched side must be even, got {n_matched}"));
    }
    check_probability(p)?;
    let n = n_matched + n_independent;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..PLANTED_ATTEMPTS {
        let mut ids: Vec<Vertex> = (0..n).collect();
        ids.shuffle(&mut rng);
        let (matched, indep) = ids.split_at(n_matched);
        let mut g = Graph::new(n);
        let mut certificate = Vec::new();
        for pair in matched.chunks(2) {
            g.add_edge(pair[0], pair[1])?;
            certificate.push(Edge::new(pair[0], pair[1]));
        }
        for &x in indep {
            for &y in matched {
                if rng.gen_bool(p) {
                    g.add_edge(x, y)?;
                }
            }
        }
        certificate.sort();
        let connected = g.is_connected();
        last = Some(Planted {
            graph: g,
            certificate,
        });
        if connected {
            break;
        }
    }
    Ok(last.unwrap_or(Planted {
        graph: Graph::new(0),
        certificate: Vec::new(),
    }))
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Attempts of the exact pairing model before switching to sequential pairing.
const PAIRING_ATTEMPTS: usize = 200;
/// Restarts of sequential pairing before reporting failure.
const SEQUENTIAL_ATTEMPTS: usize = 10_000;

/// Simple `d`-regular graph on `n` vertices.
///
/// Uses the pairing model with rejection of loops and multi-edges, which is
/// exactly uniform but rejects almost every draw once `d` grows. After a
/// fixed number of rejections it switches to Steger–Wormald sequential
/// pairing (asymptotically uniform for fixed `d`).
pub fn gen_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) {
        return usage(format!(
            "n*d must be even for a {d}-regular graph on {n} vertices"
        ));
    }
    if d >= n && !(n == 0 || d == 0) {
        return usage(format!("degree {d} is impossible on {n} vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        points.shuffle(&mut rng);
        let mut g = Graph::new(n);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                continue 'attempt;
            }
            g.add_edge(u, v)?;
        }
        return Ok(g);
    }
    for _ in 0..SEQUENTIAL_ATTEMPTS {
        if let Some(g) = sequential_pairing(n, d, &mut rng)? {
            return Ok(g);
        }
    }
    usage(format!("no simple {d}-regular graph on {n} vertices found"))
}

/// One run of sequential pairing: join two random free points whose
/// vertices are distinct and not yet adjacent; `None` if it gets stuck.
fn sequential_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Option<Graph>> {
    let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut g = Graph::new(n);
    while !points.is_empty() {
        let fits = |i: usize, j: usize, g: &Graph| {
            let (u, v) = (points[i], points[j]);
            u != v && !g.has_edge(u, v)
        };
        let mut pick = None;
        for _ in 0..64 {
            let (i, j) = (
                rng.gen_range(0..points.len()),
                rng.gen_range(0..points.len()),
            );
            if fits(i, j, &g) {
                pick = Some((i, j));
                break;
            }
        }
        if pick.is_none() {
            let valid: Vec<(usize, usize)> = (0..points.len())
                .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| fits(i, j, &g))
                .collect();
            if valid.is_empty() {
                return Ok(None);
            }
            pick = Some(valid[rng.gen_range(0..valid.len())]);
        }
        let (i, j) = pick.unwrap();
        g.add_edge(points[i], points[j])?;
        let (hi, lo) = (i.max(j), i.min(j));
        points.swap_remove(hi);
        points.swap_remove(lo);
    }
    Ok(Some(g))
}

/// Copy of `g` with independent uniform integer weights in `lo..=hi`.
pub fn with_random_weights(g: &Graph, lo: i64, hi: i64, seed: u64) -> Result<Graph> {
    if lo > hi {
        return usage(format!("empty weight range {lo}..={hi}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = Graph::new_weighted(g.capacity());
    for v in 0..g.capacity() {
        if !g.is_alive(v) {
            w.delete_vertices(&[v])?;
        }
    }
    for e in g.edges() {
        w.add_weighted_edge(e.lo(), e.hi(), Weight::from_integer(rng.gen_range(lo..=hi)))?;
    }
    Ok(w)
}
