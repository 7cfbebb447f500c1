//! Command-line front end: problem files, error reports, table reproduction.

pub mod builtins;
pub mod problem;
pub mod tables;

use std::fmt::Write as _;
use std::io::Write;
use std::time::{Duration, Instant};

use crate::chebyshev::cheb_points;
use crate::diagnostics::{dense_export, singular_spectrum, write_spectrum_csv};
use crate::factored::BvpSolver;
use crate::piecewise::{
    clustered_local_samples, grid_error, overshoot, piecewise_solve_diffmat, piecewise_solve_spectral, sup_error,
    PiecewiseSolution,
};

pub use problem::{parse_problem, Backend, GridSpec, OperatorSpec, ProblemSpec, Rhs};

/// Sample count for sup-norm errors and overshoot.
pub const ERROR_SAMPLES: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Solver(#[from] crate::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    /// Operator-dependent work; `None` when setup and solve are not separable.
    pub setup: Option<Duration>,
    /// Mean over `repeats` solves.
    pub solve: Duration,
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub backend: Backend,
    pub orders: Vec<usize>,
    /// Sup-norm error over [`ERROR_SAMPLES`] clustered points.
    pub error: Option<f64>,
    /// Largest error at the grid points.
    pub grid_error: Option<f64>,
    pub overshoot: Option<f64>,
    pub timing: Option<Timing>,
}

impl Report {
    pub const CSV_HEADER: &'static str = "backend,orders,error,grid_error,overshoot";

    pub fn csv_row(&self) -> String {
        let orders: Vec<String> = self.orders.iter().map(|m| m.to_string()).collect();
        format!(
            "{},{},{},{},{}",
            self.backend,
            orders.join(";"),
            fmt_opt(self.error),
            fmt_opt(self.grid_error),
            fmt_opt(self.overshoot)
        )
    }

    /// The quantity compared against `--tol`: the error, else the overshoot.
    pub fn headline(&self) -> Option<f64> {
        self.error.or(self.overshoot)
    }
}

pub(crate) fn fmt_num(v: f64) -> String {
    format!("{v:.6e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

enum Computed {
    Single(crate::factored::Solution),
    Piecewise(PiecewiseSolution),
}

const TIMING_BUDGET: Duration = Duration::from_millis(50);

pub fn run(spec: &ProblemSpec, time: bool) -> Result<Report, AppError> {
    let rhs = spec.rhs;
    let (computed, timing) = match (spec.backend, &spec.operator, &spec.grid) {
        (Backend::Spectral, OperatorSpec::Factored(op), GridSpec::Single(m)) => {
            let t0 = Instant::now();
            let solver = BvpSolver::new(op, &spec.bcs, *m)?;
            let setup = t0.elapsed();
            let grid = cheb_points(*m)?;
            let solve_once = || solver.solve(&grid.sample(|y| rhs.eval(y)).to_coeffs());
            let t1 = Instant::now();
            let sol = solve_once()?;
            let mut repeats = 1;
            if time {
                while t1.elapsed() < TIMING_BUDGET && repeats < 10_000 {
                    solve_once()?;
                    repeats += 1;
                }
            }
            let solve = t1.elapsed() / repeats as u32;
            (Computed::Single(sol), Timing { setup: Some(setup), solve, repeats })
        }
        (Backend::Spectral, OperatorSpec::Factored(op), GridSpec::Piecewise(g)) => {
            let t = Instant::now();
            let sol = piecewise_solve_spectral(op, |y| rhs.eval(y), g, &spec.bcs)?;
            (Computed::Piecewise(sol), Timing { setup: None, solve: t.elapsed(), repeats: 1 })
        }
        (Backend::Spectral, OperatorSpec::Pointwise(_), _) => {
            return Err(AppError::Input("pointwise operators need the diffmat backend".into()))
        }
        (Backend::Diffmat, op, grid) => {
            let grid = grid.as_piecewise()?;
            let t = Instant::now();
            let sol = piecewise_solve_diffmat(&op.collocation(), |y| rhs.eval(y), &grid, &spec.bcs)?;
            (Computed::Piecewise(sol), Timing { setup: None, solve: t.elapsed(), repeats: 1 })
        }
    };

    let (error, grid_err, overshoot) = match &computed {
        Computed::Single(sol) => {
            let GridSpec::Single(m) = spec.grid else { unreachable!() };
            let grid_err = spec.exact.map(|e| {
                let values = sol.coeffs.to_values();
                let grid = cheb_points(m).expect("solved on this grid");
                grid.points()
                    .iter()
                    .zip(values.as_slice())
                    .map(|(&y, u)| (u - e.eval(y)).abs())
                    .fold(0.0, f64::max)
            });
            let ys = clustered_local_samples(ERROR_SAMPLES);
            let us: Vec<f64> = ys.iter().map(|&y| sol.coeffs.eval(y)).collect::<crate::Result<_>>()?;
            let error = spec.exact.map(|e| {
                ys.iter().zip(&us).map(|(&y, u)| (u - e.eval(y)).abs()).fold(0.0, f64::max)
            });
            let over = spec.bounds.map(|(lo, hi)| us.iter().map(|&u| (u - hi).max(lo - u)).fold(0.0, f64::max));
            (error, grid_err, over)
        }
        Computed::Piecewise(sol) => {
            let per = ERROR_SAMPLES.div_ceil(sol.grid().intervals());
            let error = spec.exact.map(|e| sup_error(sol, |y| e.eval(y), ERROR_SAMPLES));
            let grid_err = spec.exact.map(|e| grid_error(sol, |y| e.eval(y)));
            let over = spec.bounds.map(|(lo, hi)| overshoot(sol, lo, hi, per));
            (error, grid_err, over)
        }
    };

    Ok(Report {
        backend: spec.backend,
        orders: spec.grid.orders(),
        error,
        grid_error: grid_err,
        overshoot,
        timing: time.then_some(timing),
    })
}

/// Nominal clock from `/proc/cpuinfo`, for turning seconds into cycles.
pub fn cpu_mhz() -> Option<f64> {
    let info = std::fs::read_to_string("/proc/cpuinfo").ok()?;
    info.lines()
        .find(|l| l.starts_with("cpu MHz"))
        .and_then(|l| l.split(':').nth(1))
        .and_then(|v| v.trim().parse().ok())
}

pub fn describe_timing(t: &Timing) -> String {
    let mut s = String::new();
    match t.setup {
        Some(setup) => {
            let _ = write!(s, "setup {:.3e} s, ", setup.as_secs_f64());
        }
        None => s.push_str("setup not separable, "),
    }
    let secs = t.solve.as_secs_f64();
    let _ = write!(s, "solve {secs:.3e} s (mean of {})", t.repeats);
    if let Some(mhz) = cpu_mhz() {
        let _ = write!(s, ", about {:.3e} cycles at {mhz:.0} MHz", secs * mhz * 1e6);
    }
    s
}

/// Singular spectra of each factor's banded system, as CSV.
pub fn diag(spec: &ProblemSpec, m: Option<usize>, mut out: impl Write, mut log: impl Write) -> Result<(), AppError> {
    let OperatorSpec::Factored(op) = &spec.operator else {
        return Err(AppError::Input("diag needs a factored operator".into()));
    };
    let m = match (m, &spec.grid) {
        (Some(m), _) => m,
        (None, GridSpec::Single(m)) => *m,
        (None, GridSpec::Piecewise(_)) => {
            return Err(AppError::Input("diag on a piecewise grid needs --m".into()))
        }
    };
    writeln!(out, "factor,index,sigma,localization")?;
    for (k, factor) in op.factors().into_iter().enumerate() {
        let report = singular_spectrum(&dense_export(factor, m)?, true)?;
        writeln!(log, "factor {}: {factor:?}, M = {m}, condition {:.6e}", k + 1, report.condition)?;
        let mut buf = Vec::new();
        write_spectrum_csv(&report, &mut buf)?;
        for line in String::from_utf8_lossy(&buf).lines().skip(1) {
            writeln!(out, "{},{line}", k + 1)?;
        }
    }
    Ok(())
}
