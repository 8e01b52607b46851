use std::ffi::{c_char, CStr, CString};
use std::ptr;

use chebbvp_ffi::*;

const EX1: &str = "order = 2\ninterval = [0, 1]\ncoeff 2 = 1\nrhs = 1\nbc: y(0) = 0\nbc: y(1) = 1\n";

fn last_error() -> String {
    let p = bvp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse(src: &str) -> *mut BvpProblem {
    let c = CString::new(src).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { bvp_problem_parse(c.as_ptr(), &mut p) }, BvpStatus::Ok);
    assert!(!p.is_null());
    p
}

#[test]
fn parse_solve_evaluate_free() {
    let p = parse(EX1);
    unsafe {
        assert_eq!(bvp_problem_order(p), 2);
        let (mut a, mut b) = (f64::NAN, f64::NAN);
        assert_eq!(bvp_problem_interval(p, &mut a, &mut b), BvpStatus::Ok);
        assert_eq!((a, b), (0.0, 1.0));

        let mut s = ptr::null_mut();
        assert_eq!(bvp_solve(p, 8, &mut s), BvpStatus::Ok);
        assert!(bvp_last_error_message().is_null());
        assert_eq!(bvp_solution_order(s), 2);
        assert_eq!(bvp_solution_degree(s), 8);

        let cot1 = 1.0f64.cos() / 1.0f64.sin();
        for t in [0.0, 0.3, 0.71, 1.0] {
            let mut y = f64::NAN;
            assert_eq!(bvp_solution_eval(s, t, 0, &mut y), BvpStatus::Ok);
            assert!((y - (1.0 - t.cos() + cot1 * t.sin())).abs() < 1e-9);
            let mut dy = f64::NAN;
            assert_eq!(bvp_solution_eval(s, t, 1, &mut dy), BvpStatus::Ok);
            assert!((dy - (t.sin() + cot1 * t.cos())).abs() < 1e-8);
        }

        let mut c = [0.0; 9];
        assert_eq!(bvp_solution_coeffs(s, 0, c.as_mut_ptr(), c.len()), BvpStatus::Ok);
        // Chebyshev sum at t = 1 (x = 1) is the plain coefficient sum
        assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let mut d = BvpDiagnostics::default();
        assert_eq!(bvp_solution_diagnostics(s, &mut d), BvpStatus::Ok);
        assert_eq!(d.n, 8);
        assert!(d.residual_inf < 1e-12 && d.bc_residual_inf < 1e-12);
        assert!(d.condition_estimate >= 1.0 && !d.ill_conditioned);

        bvp_solution_free(s);
        bvp_problem_free(p);
    }
}

#[test]
fn status_codes_and_messages() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(bvp_problem_parse(ptr::null(), &mut p), BvpStatus::NullPointer);

        let bad = CString::new("order = 2\ninterval = [0, 1]\n").unwrap();
        assert_eq!(bvp_problem_parse(bad.as_ptr(), &mut p), BvpStatus::Parse);
        assert!(p.is_null());
        assert!(!last_error().is_empty());

        let bytes = b"order = \xff\n\0";
        assert_eq!(bvp_problem_parse(bytes.as_ptr() as *const c_char, &mut p), BvpStatus::InvalidUtf8);

        let p = parse(EX1);
        let mut s = ptr::null_mut();
        assert_eq!(bvp_solve(p, 1, &mut s), BvpStatus::InvalidArgument);
        assert!(s.is_null());
        assert!(last_error().contains("n must be ≥ order"));
        assert_eq!(bvp_solve(ptr::null(), 8, &mut s), BvpStatus::NullPointer);

        assert_eq!(bvp_solve(p, 8, &mut s), BvpStatus::Ok);
        let mut y = 0.0;
        assert_eq!(bvp_solution_eval(s, 0.5, 2, &mut y), BvpStatus::InvalidArgument);
        assert_eq!(bvp_solution_eval(s, 1.5, 0, &mut y), BvpStatus::Domain);
        let mut c = [0.0; 4];
        assert_eq!(bvp_solution_coeffs(s, 0, c.as_mut_ptr(), c.len()), BvpStatus::BufferTooSmall);
        assert_eq!(bvp_solution_coeffs(s, 5, c.as_mut_ptr(), c.len()), BvpStatus::InvalidArgument);
        bvp_solution_free(s);
        bvp_problem_free(p);

        bvp_problem_free(ptr::null_mut());
        bvp_solution_free(ptr::null_mut());
        assert_eq!(bvp_problem_order(ptr::null()), 0);
    }
}

#[test]
fn singular_problem() {
    let p = parse("order = 2\ninterval = [0, 1]\nrhs = 0\nbc: y'(0) = 0\nbc: y'(1) = 0\n");
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(bvp_solve(p, 8, &mut s), BvpStatus::Singular);
        assert!(s.is_null());
        bvp_problem_free(p);
    }
}

#[test]
fn nodes() {
    let mut buf = [0.0; 9];
    unsafe {
        assert_eq!(bvp_cheb_nodes(8, -2.0, 3.0, buf.as_mut_ptr(), buf.len()), BvpStatus::Ok);
        assert_eq!(bvp_cheb_nodes(9, -2.0, 3.0, buf.as_mut_ptr(), buf.len()), BvpStatus::BufferTooSmall);
        assert_eq!(bvp_cheb_nodes(0, -2.0, 3.0, buf.as_mut_ptr(), buf.len()), BvpStatus::InvalidArgument);
    }
    assert_eq!(buf[0], 3.0);
    assert_eq!(buf[8], -2.0);
    assert_eq!(buf[4], 0.5);
}

#[test]
fn status_names() {
    let name = |s| unsafe { CStr::from_ptr(bvp_status_name(s)) }.to_str().unwrap();
    assert_eq!(name(BvpStatus::Ok), "ok");
    assert_eq!(name(BvpStatus::Singular), "singular system");
    assert_eq!(BvpStatus::Panic as i32, 8);
}

#[test]
fn errors_are_per_thread() {
    let bad = CString::new("nonsense").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { bvp_problem_parse(bad.as_ptr(), &mut p) }, BvpStatus::Parse);
    std::thread::spawn(|| assert!(bvp_last_error_message().is_null()))
        .join()
        .unwrap();
    assert!(!last_error().is_empty());
}
