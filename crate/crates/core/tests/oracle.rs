//! Solver against exhaustive enumeration.

mod common;

use common::*;
use dim_core::graph::{Graph, Weight};
use dim_core::oracle::{brute_force, verify};
use dim_core::solve::{solve, solve_with, Mode, SolveOptions};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), proptest::collection::vec(any::<bool>(), pairs))
        })
        .prop_map(|(n, bits)| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
}

fn weighted_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (graph_strategy(max_n), any::<u64>()).prop_map(|(g, seed)| weighted(&g, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decisions_agree(g in graph_strategy(11)) {
        let (got, _) = solve(&g, Mode::Decide).unwrap();
        let want = brute_force(&g, Mode::Decide).unwrap();
        prop_assert_eq!(got.is_some(), want.is_some());
        if let Some(s) = got {
            prop_assert!(verify(&g, &s.edges).unwrap());
        }
    }

    #[test]
    fn optima_agree(g in weighted_strategy(11)) {
        for mode in [Mode::Minimize, Mode::Maximize] {
            let (got, _) = solve(&g, mode).unwrap();
            let want = brute_force(&g, mode).unwrap();
            prop_assert_eq!(got.is_some(), want.is_some());
            if let (Some(a), Some(b)) = (got, want) {
                prop_assert_eq!(a.total_weight, b.total_weight);
                prop_assert_eq!(total(&g, &a), a.total_weight);
            }
        }
    }
}

#[test]
fn mixed_corpus_agrees() {
    for seed in 0..600 {
        let g = mixed_graph(seed);
        let (got, _) = solve(&g, Mode::Decide).unwrap();
        assert_eq!(
            got.is_some(),
            brute_force(&g, Mode::Decide).unwrap().is_some(),
            "seed {seed}"
        );
        let w = weighted(&g, seed);
        let (got, _) = solve(&w, Mode::Minimize).unwrap();
        let want = brute_force(&w, Mode::Minimize).unwrap();
        assert_eq!(
            got.map(|s| s.total_weight),
            want.map(|s| s.total_weight),
            "seed {seed}"
        );
    }
}

#[test]
fn rational_weights_are_exact() {
    // C6 with thirds: the two matchings weigh 1/3+1/3 and 1/3+1/2
    let mut g = Graph::new_weighted(6);
    let third = Weight::new(1, 3);
    for i in 0..6 {
        let w = if i == 4 { Weight::new(1, 2) } else { third };
        g.add_weighted_edge(i, (i + 1) % 6, w).unwrap();
    }
    let (min, _) = solve(&g, Mode::Minimize).unwrap();
    let (max, _) = solve(&g, Mode::Maximize).unwrap();
    assert_eq!(min.unwrap().total_weight, Weight::new(2, 3));
    assert_eq!(max.unwrap().total_weight, Weight::new(5, 6));
}

#[test]
fn threads_do_not_change_answers() {
    for seed in 0..60 {
        let g = weighted(&dive_graph(seed), seed);
        let (a, _) = solve(&g, Mode::Minimize).unwrap();
        let opts = SolveOptions {
            mode: Mode::Minimize,
            threads: 4,
            ..SolveOptions::default()
        };
        let (b, _) = solve_with(&g, &opts).unwrap();
        assert_eq!(
            a.map(|s| s.total_weight),
            b.map(|s| s.total_weight),
            "seed {seed}"
        );
    }
}

#[test]
fn optimizing_without_weights_is_an_input_error() {
    assert!(solve(&Graph::cycle(6), Mode::Minimize).is_err());
    assert!(solve(&weighted(&Graph::cycle(6), 1), Mode::Decide).is_ok());
}
