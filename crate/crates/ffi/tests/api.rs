//! The C ABI called from Rust, checked against the core crate.

use std::ffi::{CStr, CString};
use std::ptr;

use dim_core::gen::{gen_gnp, with_random_weights};
use dim_core::oracle::brute_force;
use dim_core::solve::Mode;
use dim_ffi::*;

unsafe fn last_error() -> String {
    CStr::from_ptr(dim_last_error())
        .to_string_lossy()
        .into_owned()
}

#[test]
fn handles_round_trip() {
    unsafe {
        let g = dim_graph_new(6);
        for i in 0..6 {
            assert_eq!(dim_graph_add_edge(g, i, (i + 1) % 6), DIM_OK);
        }
        assert_eq!(dim_graph_add_edge(g, 0, 9), DIM_ERR_INPUT);
        assert!(!last_error().is_empty());
        let mut s = ptr::null_mut();
        assert_eq!(dim_solve(g, DIM_MODE_DECIDE, 1, &mut s), DIM_OK);
        let k = dim_solution_num_edges(s);
        let (mut us, mut vs) = (vec![0; k], vec![0; k]);
        for i in 0..k {
            assert_eq!(dim_solution_edge(s, i, &mut us[i], &mut vs[i]), DIM_OK);
        }
        assert_eq!(dim_verify(g, us.as_ptr(), vs.as_ptr(), k), DIM_OK);
        assert_eq!(dim_verify(g, ptr::null(), ptr::null(), 0), DIM_NO);
        dim_solution_free(s);
        dim_graph_free(g);
    }
}

#[test]
fn optimization_matches_brute_force() {
    for seed in 0..40 {
        let g = with_random_weights(&gen_gnp(9, 0.35, seed).unwrap(), -6, 6, seed).unwrap();
        let text = CString::new(dim_core::format::write_graph(&g, &[])).unwrap();
        let want = brute_force(&g, Mode::Minimize).unwrap();
        unsafe {
            let mut h = ptr::null_mut();
            assert_eq!(dim_graph_parse(text.as_ptr(), &mut h), DIM_OK);
            let mut s = ptr::null_mut();
            let code = dim_solve(h, DIM_MODE_MINIMIZE, 1, &mut s);
            match want {
                None => {
                    assert_eq!(code, DIM_NO);
                    assert!(s.is_null());
                }
                Some(w) => {
                    assert_eq!(code, DIM_OK);
                    let (mut num, mut den) = (0, 0);
                    assert_eq!(dim_solution_weight(s, &mut num, &mut den), DIM_OK);
                    assert_eq!(
                        (num, den),
                        (*w.total_weight.numer(), *w.total_weight.denom())
                    );
                }
            }
            dim_solution_free(s);
            dim_graph_free(h);
        }
    }
}

#[test]
fn null_and_bad_arguments() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            dim_solve(ptr::null(), DIM_MODE_DECIDE, 1, &mut s),
            DIM_ERR_NULL
        );
        let g = dim_graph_new(3);
        assert_eq!(dim_solve(g, -1, 1, &mut s), DIM_ERR_USAGE);
        assert_eq!(dim_graph_add_weighted_edge(g, 0, 1, 1, 1), DIM_ERR_USAGE);
        assert_eq!(dim_graph_add_edge(g, 1, 1), DIM_ERR_INPUT);
        dim_graph_free(g);
        let text = CString::new("p dim 2 2\ne 1 2\n").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(dim_graph_parse(text.as_ptr(), &mut h), DIM_ERR_PARSE);
        assert!(h.is_null());
        let mut f = 0.0;
        assert_eq!(dim_branching_factor([2u32, 8].as_ptr(), 2, &mut f), DIM_OK);
        assert!((f - 1.1749).abs() < 1e-4);
        assert_eq!(dim_branching_factor(ptr::null(), 0, &mut f), DIM_ERR_NULL);
    }
}
