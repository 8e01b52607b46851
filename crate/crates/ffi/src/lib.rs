//! C ABI over `chebbvp`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Every fallible call returns a [`BvpStatus`]
//! and leaves a message retrievable with [`bvp_last_error_message`] on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chebbvp::{cheb_nodes, parse_problem, solve, EvaluateError, Problem, SolveError, SpectralSolution};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BvpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Singular = 4,
    Domain = 5,
    InvalidArgument = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BvpDiagnostics {
    pub residual_inf: f64,
    pub bc_residual_inf: f64,
    pub condition_estimate: f64,
    pub ill_conditioned: bool,
    pub n: usize,
}

/// A parsed problem.
pub struct BvpProblem {
    inner: Problem,
}

/// A solved problem: series for `y` and its first `m - 1` derivatives.
pub struct BvpSolution {
    inner: SpectralSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Failure = (BvpStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BvpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BvpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BvpStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (BvpStatus::NullPointer, format!("{what} is null"))
}

fn solve_failure(e: SolveError) -> Failure {
    let status = match e {
        SolveError::Singular { .. } => BvpStatus::Singular,
        SolveError::Eval { .. } | SolveError::Cheb(_) => BvpStatus::Domain,
        _ => BvpStatus::InvalidArgument,
    };
    (status, e.to_string())
}

/// Parse problem-file text into a new handle stored in `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bvp_problem_parse(src: *const c_char, out: *mut *mut BvpProblem) -> BvpStatus {
    guard(|| {
        if src.is_null() {
            return Err(null("src"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(src)
            .to_str()
            .map_err(|e| (BvpStatus::InvalidUtf8, e.to_string()))?;
        let inner = parse_problem(text).map_err(|e| (BvpStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(BvpProblem { inner }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`bvp_problem_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bvp_problem_free(p: *mut BvpProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Order m of the equation, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bvp_problem_order(p: *const BvpProblem) -> usize {
    p.as_ref().map_or(0, |p| p.inner.order())
}

/// # Safety
/// `p` must be a live handle; `a` and `b` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bvp_problem_interval(p: *const BvpProblem, a: *mut f64, b: *mut f64) -> BvpStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("problem"))?;
        if a.is_null() || b.is_null() {
            return Err(null("interval output"));
        }
        (*a, *b) = p.inner.interval();
        Ok(())
    })
}

/// Solve at polynomial degree `n`; the new solution handle goes to `*out`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bvp_solve(p: *const BvpProblem, n: usize, out: *mut *mut BvpSolution) -> BvpStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("problem"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inner = solve(&p.inner, n).map_err(solve_failure)?;
        *out = Box::into_raw(Box::new(BvpSolution { inner }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`bvp_solve`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bvp_solution_free(s: *mut BvpSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bvp_solution_order(s: *const BvpSolution) -> usize {
    s.as_ref().map_or(0, |s| s.inner.order())
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bvp_solution_degree(s: *const BvpSolution) -> usize {
    s.as_ref().map_or(0, |s| s.inner.degree())
}

/// Value of `y^(deriv)` at `t`, for `deriv < order`.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bvp_solution_eval(s: *const BvpSolution, t: f64, deriv: usize, out: *mut f64) -> BvpStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.inner.evaluate(t, deriv).map_err(|e| {
            let status = match e {
                EvaluateError::DerivOutOfRange { .. } => BvpStatus::InvalidArgument,
                EvaluateError::Domain(_) => BvpStatus::Domain,
            };
            (status, e.to_string())
        })?;
        Ok(())
    })
}

/// Copy the `degree + 1` Chebyshev coefficients of component `component`
/// (the series for `y^(component)`) into `buf`.
///
/// # Safety
/// `s` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bvp_solution_coeffs(
    s: *const BvpSolution,
    component: usize,
    buf: *mut f64,
    len: usize,
) -> BvpStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("solution"))?;
        let series = s.inner.component(component).ok_or_else(|| {
            (
                BvpStatus::InvalidArgument,
                format!("component {component} out of range 0..{}", s.inner.order()),
            )
        })?;
        let c = series.coeffs();
        if len < c.len() {
            return Err((BvpStatus::BufferTooSmall, format!("need {} slots, got {len}", c.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(c.as_ptr(), buf, c.len());
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bvp_solution_diagnostics(s: *const BvpSolution, out: *mut BvpDiagnostics) -> BvpStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = s.inner.diagnostics();
        *out = BvpDiagnostics {
            residual_inf: d.residual_inf,
            bc_residual_inf: d.bc_residual_inf,
            condition_estimate: d.condition_estimate,
            ill_conditioned: d.ill_conditioned,
            n: d.n,
        };
        Ok(())
    })
}

/// Write the `n + 1` collocation nodes on `[a, b]` (from `b` down to `a`) into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bvp_cheb_nodes(n: usize, a: f64, b: f64, buf: *mut f64, len: usize) -> BvpStatus {
    guard(|| {
        let nodes = cheb_nodes(n, a, b).map_err(|e| (BvpStatus::InvalidArgument, e.to_string()))?;
        if len < nodes.len() {
            return Err((BvpStatus::BufferTooSmall, format!("need {} slots, got {len}", nodes.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(nodes.as_ptr(), buf, nodes.len());
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn bvp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn bvp_status_name(status: BvpStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BvpStatus::Ok => c"ok",
        BvpStatus::NullPointer => c"null pointer",
        BvpStatus::InvalidUtf8 => c"invalid utf-8",
        BvpStatus::Parse => c"parse error",
        BvpStatus::Singular => c"singular system",
        BvpStatus::Domain => c"domain error",
        BvpStatus::InvalidArgument => c"invalid argument",
        BvpStatus::BufferTooSmall => c"buffer too small",
        BvpStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
