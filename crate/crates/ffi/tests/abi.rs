use std::ffi::{CStr, CString};
use std::ptr;

use specint_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sib_last_error()) }.to_string_lossy().into_owned()
}

fn dirichlet(endpoint: i32, value: f64) -> SibCondition {
    SibCondition { endpoint, derivative: 0, value }
}

#[test]
fn solves_a_second_order_problem() {
    // u'' - 4u = -4 - π² sin(πy) ... built from u = 1 + sin(πy), so u(±1) = 1
    let m = 48;
    let mut y = vec![0.0; m + 1];
    assert_eq!(unsafe { sib_grid_points(m, y.as_mut_ptr(), y.len()) }, SibStatus::Ok);
    let pi = std::f64::consts::PI;
    let f: Vec<f64> = y.iter().map(|&t| -(pi * pi + 4.0) * (pi * t).sin() - 4.0).collect();

    let quad = [0.0, -4.0];
    let bcs = [dirichlet(-1, 1.0), dirichlet(1, 1.0)];
    let mut solver = ptr::null_mut();
    let s = unsafe { sib_solver_new(ptr::null(), 0, quad.as_ptr(), 1, bcs.as_ptr(), 2, m, &mut solver) };
    assert_eq!(s, SibStatus::Ok, "{}", last_error());
    assert_eq!(last_error(), "");

    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sib_solver_solve(solver, f.as_ptr(), f.len(), &mut sol) }, SibStatus::Ok);
    assert_eq!(unsafe { sib_solution_order(sol) }, m);
    for t in [-1.0, -0.3, 0.0, 0.77, 1.0] {
        let mut u = f64::NAN;
        assert_eq!(unsafe { sib_solution_eval(sol, t, &mut u) }, SibStatus::Ok);
        assert!((u - 1.0 - (pi * t).sin()).abs() < 1e-13, "{t}: {u}");
    }
    let mut coeffs = vec![0.0; m + 1];
    assert_eq!(unsafe { sib_solution_coeffs(sol, coeffs.as_mut_ptr(), coeffs.len()) }, SibStatus::Ok);
    assert!((coeffs[0] - 2.0).abs() < 1e-13, "mean term {}", coeffs[0]);
    assert_eq!(unsafe { sib_solution_coeffs(sol, coeffs.as_mut_ptr(), 3) }, SibStatus::BufferTooSmall);

    unsafe {
        sib_solution_free(sol);
        sib_solver_free(solver);
    }
}

#[test]
fn reports_errors_through_status_and_message() {
    let a = [-3.0];
    let mut solver = ptr::null_mut();

    let one = [dirichlet(0, 1.0)];
    let s = unsafe { sib_solver_new(a.as_ptr(), 1, ptr::null(), 0, one.as_ptr(), 1, 16, &mut solver) };
    assert_eq!(s, SibStatus::InvalidArgument);
    assert!(last_error().contains("endpoint"));
    assert!(solver.is_null());

    let two = [dirichlet(-1, 0.0), dirichlet(1, 0.0)];
    let s = unsafe { sib_solver_new(a.as_ptr(), 1, ptr::null(), 0, two.as_ptr(), 2, 16, &mut solver) };
    assert_eq!(s, SibStatus::InvalidArgument);
    assert!(!last_error().is_empty());

    let s = unsafe { sib_solver_new(ptr::null(), 1, ptr::null(), 0, two.as_ptr(), 1, 16, &mut solver) };
    assert_eq!(s, SibStatus::NullPointer);
    assert!(last_error().contains("linear"));

    let s = unsafe { sib_solver_new(a.as_ptr(), 1, ptr::null(), 0, two.as_ptr(), 1, 16, ptr::null_mut()) };
    assert_eq!(s, SibStatus::NullPointer);

    // conditions on u' alone cannot fix the constant of u'' = f
    let quad = [0.0, 0.0];
    let flat = [
        SibCondition { endpoint: -1, derivative: 1, value: 0.0 },
        SibCondition { endpoint: 1, derivative: 1, value: 0.0 },
    ];
    let s = unsafe { sib_solver_new(ptr::null(), 0, quad.as_ptr(), 1, flat.as_ptr(), 2, 16, &mut solver) };
    assert_eq!(s, SibStatus::Ok, "{}", last_error());
    let mut sol = ptr::null_mut();
    let f = [0.0; 17];
    assert_eq!(unsafe { sib_solver_solve(solver, f.as_ptr(), 17, &mut sol) }, SibStatus::Singular);
    assert!(sol.is_null());
    unsafe { sib_solver_free(solver) };

    assert_eq!(unsafe { sib_solver_solve(ptr::null(), [0.0].as_ptr(), 1, &mut sol) }, SibStatus::NullPointer);
    let mut u = 0.0;
    assert_eq!(unsafe { sib_solution_eval(ptr::null(), 0.0, &mut u) }, SibStatus::NullPointer);
    assert_eq!(unsafe { sib_solution_order(ptr::null()) }, 0);
    unsafe {
        sib_solver_free(ptr::null_mut());
        sib_solution_free(ptr::null_mut());
    }
}

#[test]
fn wrong_sample_count_and_domain() {
    let a = [-3.0];
    let bc = [dirichlet(-1, 0.0)];
    let mut solver = ptr::null_mut();
    assert_eq!(unsafe { sib_solver_new(a.as_ptr(), 1, ptr::null(), 0, bc.as_ptr(), 1, 8, &mut solver) }, SibStatus::Ok);
    let f = [3.0; 9];
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sib_solver_solve(solver, f.as_ptr(), 5, &mut sol) }, SibStatus::InvalidArgument);
    assert!(sol.is_null());
    assert_eq!(unsafe { sib_solver_solve(solver, f.as_ptr(), 9, &mut sol) }, SibStatus::Ok);
    let mut u = 0.0;
    assert_eq!(unsafe { sib_solution_eval(sol, 1.5, &mut u) }, SibStatus::InvalidArgument);
    assert!(last_error().contains("1.5"));
    unsafe {
        sib_solution_free(sol);
        sib_solver_free(solver);
    }
}

#[test]
fn runs_problem_text() {
    let text = CString::new(
        "[operator]\nlinear = -50\n[rhs]\nconst = 50\n[grid]\nm = 64\n[bc]\nat=-1 d0=1 value=0\n\
         [exact]\nname = left_layer\na = 50\n",
    )
    .unwrap();
    let mut report = SibReport { error: 0.0, grid_error: 0.0, overshoot: 0.0 };
    assert_eq!(unsafe { sib_run_problem(text.as_ptr(), &mut report) }, SibStatus::Ok);
    assert!(report.error < 1e-13 && report.grid_error < 1e-13);
    assert!(report.overshoot.is_nan());

    let bad = CString::new("[operator]\nlinear = x\n").unwrap();
    assert_eq!(unsafe { sib_run_problem(bad.as_ptr(), &mut report) }, SibStatus::Parse);
    assert!(last_error().starts_with("line 2"), "{}", last_error());
}

#[test]
fn errors_are_per_thread() {
    let mut y = [0.0; 2];
    assert_eq!(unsafe { sib_grid_points(4, y.as_mut_ptr(), 2) }, SibStatus::BufferTooSmall);
    let other = std::thread::spawn(last_error).join().unwrap();
    assert_eq!(other, "");
    assert!(last_error().contains("need 5"));
    let v = unsafe { CStr::from_ptr(sib_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
