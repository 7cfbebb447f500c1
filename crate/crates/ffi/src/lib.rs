//! C ABI over the single-grid solver and the problem-file runner.
//!
//! Every entry point returns a [`SibStatus`]; on failure the message is
//! available from [`sib_last_error`] on the same thread. Handles are opaque
//! and owned by the caller until passed to the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use specint::app::{self, AppError};
use specint::chebyshev::{cheb_points, Endpoint, GridValues};
use specint::factored::{BoundaryCondition, BvpSolver, OperatorFactorization, Solution};
use specint::integration::{FirstOrderOp, SecondOrderOp};
use specint::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SibStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Singular system or boundary conditions that do not fix the solution.
    Singular = 3,
    TooLarge = 4,
    Parse = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// `derivative`-th derivative at `endpoint` (-1 or +1) equals `value`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SibCondition {
    pub endpoint: i32,
    pub derivative: u32,
    pub value: f64,
}

/// Outcome of [`sib_run_problem`]; absent quantities are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SibReport {
    pub error: f64,
    pub grid_error: f64,
    pub overshoot: f64,
}

pub struct SibSolver(BvpSolver);

pub struct SibSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(SibStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Singular(_) | Error::DegenerateBoundaryConditions | Error::DegenerateInterfaces => {
                SibStatus::Singular
            }
            Error::TooLarge { .. } => SibStatus::TooLarge,
            _ => SibStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<AppError> for Failure {
    fn from(e: AppError) -> Self {
        match e {
            AppError::Solver(e) => e.into(),
            AppError::Parse { .. } | AppError::Input(_) => Failure(SibStatus::Parse, e.to_string()),
            AppError::Io(_) => Failure(SibStatus::InvalidArgument, e.to_string()),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SibStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SibStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SibStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            SibStatus::Panic
        }
    }
}

/// `len` elements from `p`; a null `p` is accepted only when `len == 0`.
unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn condition(c: &SibCondition) -> Result<BoundaryCondition, Failure> {
    let endpoint = match c.endpoint {
        -1 => Endpoint::Left,
        1 => Endpoint::Right,
        e => return Err(Failure(SibStatus::InvalidArgument, format!("endpoint must be -1 or +1, got {e}"))),
    };
    Ok(BoundaryCondition::derivative(endpoint, c.derivative as usize, c.value)?)
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sib_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static, NUL-terminated.
#[no_mangle]
pub extern "C" fn sib_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Writes the `m + 1` Chebyshev points of order `m` in grid order
/// (`+1` first).
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sib_grid_points(m: usize, out: *mut f64, len: usize) -> SibStatus {
    guard(|| {
        let grid = cheb_points(m)?;
        if len < m + 1 {
            return Err(Failure(SibStatus::BufferTooSmall, format!("need {} doubles, got {len}", m + 1)));
        }
        slice_mut(out, len, "out")?[..=m].copy_from_slice(grid.points());
        Ok(())
    })
}

/// Prepares a solver for `Π(D - linear[i]) Π(D² + b_j D + c_j) u = f` with
/// `quadratic` holding `n_quadratic` pairs `(b_j, c_j)`. The number of
/// conditions must equal the order of the operator.
///
/// # Safety
/// Array arguments must hold the stated number of elements; `out` must be
/// writable. On success `*out` owns a solver to release with
/// [`sib_solver_free`].
#[no_mangle]
pub unsafe extern "C" fn sib_solver_new(
    linear: *const f64,
    n_linear: usize,
    quadratic: *const f64,
    n_quadratic: usize,
    conditions: *const SibCondition,
    n_conditions: usize,
    m: usize,
    out: *mut *mut SibSolver,
) -> SibStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let linear = slice(linear, n_linear, "linear")?.iter().map(|&a| FirstOrderOp { a }).collect();
        let quadratic = slice(quadratic, 2 * n_quadratic, "quadratic")?
            .chunks_exact(2)
            .map(|p| SecondOrderOp { b: p[0], c: p[1] })
            .collect();
        let bcs = slice(conditions, n_conditions, "conditions")?
            .iter()
            .map(condition)
            .collect::<Result<Vec<_>, _>>()?;
        let op = OperatorFactorization::new(linear, quadratic)?;
        let solver = BvpSolver::new(&op, &bcs, m)?;
        *out = Box::into_raw(Box::new(SibSolver(solver)));
        Ok(())
    })
}

/// # Safety
/// `solver` must be null or come from [`sib_solver_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn sib_solver_free(solver: *mut SibSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Solves with the right-hand side given at the solver's Chebyshev points,
/// in the order of [`sib_grid_points`].
///
/// # Safety
/// `solver` must be live, `f` must hold `len` doubles and `out` must be
/// writable. On success `*out` owns a solution to release with
/// [`sib_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn sib_solver_solve(
    solver: *const SibSolver,
    f: *const f64,
    len: usize,
    out: *mut *mut SibSolution,
) -> SibStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let solver = solver.as_ref().ok_or_else(|| null("solver"))?;
        let m = solver.0.grid_order();
        if len != m + 1 {
            return Err(Failure(SibStatus::InvalidArgument, format!("expected {} samples, got {len}", m + 1)));
        }
        let values = GridValues::new(slice(f, len, "f")?.to_vec())?;
        let sol = solver.0.solve(&values.to_coeffs())?;
        *out = Box::into_raw(Box::new(SibSolution(sol)));
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or come from [`sib_solver_solve`], freed once.
#[no_mangle]
pub unsafe extern "C" fn sib_solution_free(solution: *mut SibSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Grid order of the solution; 0 for a null handle.
///
/// # Safety
/// `solution` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sib_solution_order(solution: *const SibSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.0.coeffs.order())
}

/// # Safety
/// `solution` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sib_solution_eval(solution: *const SibSolution, y: f64, out: *mut f64) -> SibStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = s.0.eval(y)?;
        Ok(())
    })
}

/// Writes the `order + 1` stored Chebyshev coefficients; the first is twice
/// the mean term.
///
/// # Safety
/// `solution` must be live and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sib_solution_coeffs(solution: *const SibSolution, out: *mut f64, len: usize) -> SibStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        let c = s.0.coeffs.as_slice();
        if len < c.len() {
            return Err(Failure(SibStatus::BufferTooSmall, format!("need {} doubles, got {len}", c.len())));
        }
        slice_mut(out, len, "out")?[..c.len()].copy_from_slice(c);
        Ok(())
    })
}

/// Parses and solves a problem file given as text, as `specint solve` does.
///
/// # Safety
/// `text` must be a NUL-terminated string and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn sib_run_problem(text: *const c_char, report: *mut SibReport) -> SibStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let report = report.as_mut().ok_or_else(|| null("report"))?;
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(SibStatus::Parse, format!("problem text is not UTF-8: {e}")))?;
        let r = app::run(&app::parse_problem(text)?, false)?;
        *report = SibReport {
            error: r.error.unwrap_or(f64::NAN),
            grid_error: r.grid_error.unwrap_or(f64::NAN),
            overshoot: r.overshoot.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}
