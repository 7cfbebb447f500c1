//! Built-in problem files and the rows of the reproduced tables.

use std::io::Write;

use crate::piecewise::PiecewiseGrid;

use super::{fmt_num, parse_problem, run, AppError, Backend, GridSpec, ProblemSpec};

pub const TABLE_IDS: [&str; 7] = ["1a", "1b", "1c", "1d", "1e", "3", "4"];

/// Shipped problem files by stem.
pub const BUILTIN_PROBLEMS: [(&str, &str); 9] = [
    ("table1a", include_str!("../../problems/table1a.bvp")),
    ("table1b", include_str!("../../problems/table1b.bvp")),
    ("table1c", include_str!("../../problems/table1c.bvp")),
    ("table1d", include_str!("../../problems/table1d.bvp")),
    ("table1e", include_str!("../../problems/table1e.bvp")),
    ("table1e_linear", include_str!("../../problems/table1e_linear.bvp")),
    ("table3", include_str!("../../problems/table3.bvp")),
    ("table4", include_str!("../../problems/table4.bvp")),
    ("figure2", include_str!("../../problems/figure2.bvp")),
];

pub fn builtin(name: &str) -> Result<ProblemSpec, AppError> {
    let text = BUILTIN_PROBLEMS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| AppError::Input(format!("no built-in problem `{name}`")))?;
    parse_problem(text)
}

pub const TABLE1A_ORDERS: [usize; 5] = [1024, 4096, 8192, 16384, 65536];
pub const TABLE1B_ORDERS: [usize; 5] = [8, 16, 32, 1024, 65536];
pub const TABLE1C_ORDERS: [usize; 5] = [1024, 4096, 8192, 16384, 32768];
pub const TABLE1D_ORDERS: [usize; 5] = [8, 16, 32, 1024, 16384];
pub const TABLE1E_ORDERS: [usize; 4] = [1024, 8192, 16384, 131072];

/// `(M1, M2, M3, node2, node3)`.
pub const TABLE3_ROWS: [(usize, usize, usize, f64, f64); 5] = [
    (16, 1024, 32, 0.5, 0.99999),
    (16, 4096, 32, 0.5, 0.99999),
    (32, 128, 32, 0.999, 0.99999),
    (32, 64, 32, 0.9999, 0.99999),
    (32, 32, 32, 0.99995, 0.99999),
];

/// `(m, node4 / sqrt(eps))`.
pub const TABLE4_ROWS: [(usize, f64); 4] = [(32, 5.0), (32, 3.0), (32, 7.0), (24, 5.0)];
pub const TABLE4_EPS: f64 = 1e-12;

pub fn table3_grid(row: (usize, usize, usize, f64, f64)) -> crate::Result<GridSpec> {
    let (m1, m2, m3, n2, n3) = row;
    Ok(GridSpec::Piecewise(PiecewiseGrid::new(vec![-1.0, n2, n3, 1.0], vec![m1, m2, m3])?))
}

pub fn table4_grid(m: usize, node4: f64) -> crate::Result<GridSpec> {
    let s = TABLE4_EPS.sqrt();
    let nodes = vec![-1.0, -8.0 * s, -3.0 * s, node4 * s, 8.0 * s, 1.0];
    Ok(GridSpec::Piecewise(PiecewiseGrid::new(nodes, vec![m; 5])?))
}

/// `(grid-point error, sampled error)`.
fn errors_at(spec: &ProblemSpec, grid: GridSpec) -> Result<(f64, f64), AppError> {
    let report = run(&spec.clone().with_grid(grid), false)?;
    match (report.grid_error, report.error) {
        (Some(g), Some(s)) => Ok((g, s)),
        _ => Err(AppError::Input("built-in problem lacks an exact solution".into())),
    }
}

fn single_grid_table(
    out: &mut impl Write,
    name: &str,
    param: &str,
    value: f64,
    orders: &[usize],
) -> Result<(), AppError> {
    let spec = builtin(name)?;
    writeln!(out, "{param},M,error,sampled_error")?;
    for &m in orders {
        let (g, s) = errors_at(&spec, GridSpec::Single(m))?;
        writeln!(out, "{value:e},{m},{},{}", fmt_num(g), fmt_num(s))?;
    }
    Ok(())
}

/// Writes the rows of table `id` as CSV.
pub fn reproduce(id: &str, mut out: impl Write) -> Result<(), AppError> {
    match id {
        "1a" => single_grid_table(&mut out, "table1a", "a", 1e6, &TABLE1A_ORDERS),
        "1b" => single_grid_table(&mut out, "table1b", "a", 1e6, &TABLE1B_ORDERS),
        "1c" => single_grid_table(&mut out, "table1c", "a", 1e6, &TABLE1C_ORDERS),
        "1d" => single_grid_table(&mut out, "table1d", "c", 1e4, &TABLE1D_ORDERS),
        "1e" => {
            let linear = builtin("table1e_linear")?;
            let quadratic = builtin("table1e")?;
            writeln!(out, "a,b,M,error1,error2,sampled_error1,sampled_error2")?;
            for m in TABLE1E_ORDERS {
                let (g1, s1) = errors_at(&linear, GridSpec::Single(m))?;
                let (g2, s2) = errors_at(&quadratic, GridSpec::Single(m))?;
                let row = [g1, g2, s1, s2].map(fmt_num).join(",");
                writeln!(out, "1e6,2e6,{m},{row}")?;
            }
            Ok(())
        }
        "3" => {
            let spectral = builtin("table3")?;
            let diffmat = spectral.clone().with_backend(Backend::Diffmat)?;
            writeln!(out, "M1,M2,M3,node2,node3,error1,error2,sampled_error1,sampled_error2")?;
            for row in TABLE3_ROWS {
                let (g1, s1) = errors_at(&spectral, table3_grid(row)?)?;
                let (g2, s2) = errors_at(&diffmat, table3_grid(row)?)?;
                let (m1, m2, m3, n2, n3) = row;
                let errs = [g1, g2, s1, s2].map(fmt_num).join(",");
                writeln!(out, "{m1},{m2},{m3},{n2},{n3},{errs}")?;
            }
            Ok(())
        }
        "4" => {
            let spec = builtin("table4")?;
            writeln!(out, "m,node4_over_sqrt_eps,overshoot")?;
            for (m, node4) in TABLE4_ROWS {
                let report = run(&spec.clone().with_grid(table4_grid(m, node4)?), false)?;
                let over = report.overshoot.ok_or_else(|| AppError::Input("table4 lacks bounds".into()))?;
                writeln!(out, "{m},{node4},{}", fmt_num(over))?;
            }
            Ok(())
        }
        _ => Err(AppError::Input(format!("unknown table `{id}`; expected one of {}", TABLE_IDS.join(", ")))),
    }
}
