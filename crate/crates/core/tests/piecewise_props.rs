//! Interface continuity, refinement, and agreement of the two backends.

mod common;

use common::{factorization, wave};
use proptest::prelude::*;
use specint::app::tables::{builtin, table3_grid, TABLE3_ROWS};
use specint::app::{GridSpec, OperatorSpec};
use specint::piecewise::{
    clustered_local_samples, grid_error, interface_jumps, piecewise_solve_diffmat, piecewise_solve_spectral,
    PiecewiseGrid, PiecewiseSolution,
};

fn sup_norm(sol: &PiecewiseSolution) -> f64 {
    let ts = clustered_local_samples(200);
    (0..sol.grid().intervals())
        .flat_map(|i| ts.iter().map(move |&t| sol.eval_local(i, t).abs()))
        .fold(0.0, f64::max)
}

/// Sup of `|a - b|` on a common set of points; both solutions must share a grid.
fn distance(a: &PiecewiseSolution, b: &PiecewiseSolution) -> f64 {
    let ts = clustered_local_samples(400);
    let g = a.grid();
    let mut worst = 0.0f64;
    for i in 0..g.intervals() {
        for &t in &ts {
            let y = g.to_physical(i, t);
            let (j, s) = b.grid().locate(y).unwrap();
            worst = worst.max((a.eval_local(i, t) - b.eval_local(j, s)).abs());
        }
    }
    worst
}

fn three_intervals(cuts: (f64, f64), orders: Vec<usize>) -> PiecewiseGrid {
    PiecewiseGrid::new(vec![-1.0, cuts.0, cuts.1, 1.0], orders).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_interfaces_are_continuous(
        op in factorization(4, 10.0, 1.0),
        u in wave(),
        cuts in (-0.8f64..-0.1, 0.1f64..0.8),
        orders in prop::collection::vec(16usize..40, 3),
    ) {
        let grid = three_intervals(cuts, orders);
        let poly = op.polynomial();
        let bcs = u.conditions(op.order(), -1.0, 1.0);
        let sol = piecewise_solve_spectral(&op, |y| u.apply(&poly, y), &grid, &bcs).unwrap();
        let scale = sup_norm(&sol);
        for (k, jump) in interface_jumps(&sol, op.order()).into_iter().enumerate() {
            prop_assert!(jump <= 1e-9 * scale, "derivative {}: {:e} vs {:e}", k, jump, scale);
        }
    }

    #[test]
    fn diffmat_interfaces_are_continuous(
        op in factorization(2, 10.0, 1.5),
        u in wave(),
        cuts in (-0.8f64..-0.1, 0.1f64..0.8),
        orders in prop::collection::vec(16usize..40, 3),
    ) {
        let grid = three_intervals(cuts, orders);
        let poly = op.polynomial();
        let bcs = u.conditions(op.order(), -1.0, 1.0);
        let sol = piecewise_solve_diffmat(&op.clone().into(), |y| u.apply(&poly, y), &grid, &bcs).unwrap();
        let scale = sup_norm(&sol);
        for (k, jump) in interface_jumps(&sol, op.order()).into_iter().enumerate() {
            prop_assert!(jump <= 1e-9 * scale, "derivative {}: {:e} vs {:e}", k, jump, scale);
        }
    }

    #[test]
    fn splitting_an_interval_keeps_the_solution(
        op in factorization(4, 10.0, 1.0),
        u in wave(),
        cut in -0.6f64..0.6,
        share in 0.3f64..0.7,
    ) {
        let total = 64;
        let left = ((total as f64 * share) as usize).max(16);
        let coarse = PiecewiseGrid::new(vec![-1.0, 1.0], vec![total]).unwrap();
        let fine = PiecewiseGrid::new(vec![-1.0, cut, 1.0], vec![left, total - left]).unwrap();
        let poly = op.polynomial();
        let bcs = u.conditions(op.order(), -1.0, 1.0);
        let f = |y: f64| u.apply(&poly, y);
        let a = piecewise_solve_spectral(&op, f, &coarse, &bcs).unwrap();
        let b = piecewise_solve_spectral(&op, f, &fine, &bcs).unwrap();
        let d = distance(&a, &b);
        prop_assert!(d <= 1e-9, "{:?}: {:e}", op, d);
    }
}

#[test]
fn layer_problem_backends_agree() {
    let spectral = builtin("table3").unwrap();
    let OperatorSpec::Factored(op) = &spectral.operator else { panic!("table3 is factored") };
    let exact = spectral.exact.unwrap();
    let rhs = spectral.rhs;
    // row 2 is skipped: its 4096-point middle interval makes a dense system of 4161
    for row in [0, 2, 3, 4].map(|k| TABLE3_ROWS[k]) {
        let GridSpec::Piecewise(grid) = table3_grid(row).unwrap() else { unreachable!() };
        let s = piecewise_solve_spectral(op, |y| rhs.eval(y), &grid, &spectral.bcs).unwrap();
        let d = piecewise_solve_diffmat(&op.clone().into(), |y| rhs.eval(y), &grid, &spectral.bcs).unwrap();
        let (es, ed) = (grid_error(&s, |y| exact.eval(y)), grid_error(&d, |y| exact.eval(y)));
        let gap = distance(&s, &d);
        assert!(gap <= 10.0 * es.max(ed), "{row:?}: gap {gap:e}, errors {es:e} {ed:e}");
    }
}
