//! Piecewise Chebyshev grids.
//!
//! The domain `[η_0, η_n]` is split at user-chosen nodes and each interval
//! carries its own Chebyshev grid. Two backends join the pieces:
//!
//! * spectral integration: each interval is mapped to `[-1, 1]`, solved for
//!   one particular and `r` homogeneous chains, and the `r·n` constants are
//!   fixed by the boundary conditions plus continuity of the chain
//!   quantities of levels `0..r` at every interior node;
//! * collocation: grid values are the unknowns, shared at interior nodes,
//!   with derivative matching through differentiation-matrix endpoint rows.
//!   This backend also accepts coefficients that are affine in `y`.

use std::f64::consts::PI;

use crate::banded::DenseMatrix;
use crate::chebyshev::{cheb_points, ChebCoeffs, Endpoint, GridValues};
use crate::diffmat::{build_diffmat, build_operator_matrix, endpoint_row, LocalOp, SpectralDerivative};
use crate::error::{Error, Result};
use crate::factored::{
    check_conditions, combine, solve_column_scaled, BoundaryCondition, Chain, EndpointRows,
    FactoredSolver, OperatorFactorization,
};
use crate::integration::{FirstOrderOp, SecondOrderOp};

/// Nodes `η_0 < .. < η_n` and one grid order per interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseGrid {
    nodes: Vec<f64>,
    orders: Vec<usize>,
}

impl PiecewiseGrid {
    pub fn new(nodes: Vec<f64>, orders: Vec<usize>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidGrid("at least two nodes are required".into()));
        }
        if orders.len() != nodes.len() - 1 {
            return Err(Error::InvalidGrid(format!(
                "{} nodes need {} grid orders, got {}",
                nodes.len(),
                nodes.len() - 1,
                orders.len()
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("nodes must be finite".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(format!(
                "nodes must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidGrid("grid orders must be positive".into()));
        }
        Ok(Self { nodes, orders })
    }

    /// One interval `[-1, 1]` of order `m`.
    pub fn single(m: usize) -> Result<Self> {
        Self::new(vec![-1.0, 1.0], vec![m])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn intervals(&self) -> usize {
        self.orders.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Physical point of local coordinate `t` in interval `i`.
    pub fn to_physical(&self, i: usize, t: f64) -> f64 {
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        if t == -1.0 {
            a
        } else if t == 1.0 {
            b
        } else {
            0.5 * (a + b) + 0.5 * (b - a) * t
        }
    }

    /// Local coordinate of `y` in interval `i`, clamped to `[-1, 1]`.
    pub fn to_local(&self, i: usize, y: f64) -> f64 {
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        ((2.0 * y - a - b) / (b - a)).clamp(-1.0, 1.0)
    }

    /// Interval holding `y` (nodes belong to the interval on their left)
    /// and the local coordinate.
    pub fn locate(&self, y: f64) -> Result<(usize, f64)> {
        if !(self.start() <= y && y <= self.end()) {
            return Err(Error::OutOfDomain(y));
        }
        let i = self.nodes[1..]
            .iter()
            .position(|&b| y <= b)
            .unwrap_or(self.intervals() - 1);
        Ok((i, self.to_local(i, y)))
    }

    fn physical_points(&self, i: usize) -> Vec<f64> {
        cheb_points(self.orders[i])
            .expect("orders are positive")
            .points()
            .iter()
            .map(|&t| self.to_physical(i, t))
            .collect()
    }
}

/// Operator on an interval of width `w` seen from its local variable, and
/// the factor `(w/2)^r` the right-hand side picks up.
pub fn rescale_operator(op: &OperatorFactorization, w: f64) -> Result<(OperatorFactorization, f64)> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InvalidGrid(format!("interval width {w} is not positive")));
    }
    let h = 0.5 * w;
    let linear = op.linear().iter().map(|f| FirstOrderOp { a: f.a * h }).collect();
    let quadratic = op
        .quadratic()
        .iter()
        .map(|q| SecondOrderOp {
            b: q.b * h,
            c: q.c * h * h,
        })
        .collect();
    Ok((
        OperatorFactorization::new(linear, quadratic)?,
        h.powi(op.order() as i32),
    ))
}

#[derive(Debug, Clone, PartialEq)]
enum Piece {
    Coeffs(ChebCoeffs),
    Values(GridValues),
}

/// Solution assembled from per-interval pieces, each in its local variable.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSolution {
    grid: PiecewiseGrid,
    pieces: Vec<Piece>,
    constants: Vec<Vec<f64>>,
    /// Per interval and matched level k: the level-k chain quantity times
    /// `(2/w)^k` at local `+1` and `-1`. Empty for the collocation backend.
    levels: Vec<Vec<(f64, f64)>>,
}

impl PiecewiseSolution {
    pub fn grid(&self) -> &PiecewiseGrid {
        &self.grid
    }

    /// Combination constants of each interval; empty for the collocation
    /// backend.
    pub fn constants(&self) -> &[Vec<f64>] {
        &self.constants
    }

    /// Chebyshev coefficients of interval `i` in its local variable.
    pub fn coeffs(&self, i: usize) -> ChebCoeffs {
        match &self.pieces[i] {
            Piece::Coeffs(c) => c.clone(),
            Piece::Values(v) => v.to_coeffs(),
        }
    }

    /// Values of interval `i` on its local grid, in grid order.
    pub fn values(&self, i: usize) -> GridValues {
        match &self.pieces[i] {
            Piece::Coeffs(c) => c.to_values(),
            Piece::Values(v) => v.clone(),
        }
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        let (i, t) = self.grid.locate(y)?;
        Ok(self.eval_local(i, t))
    }

    /// Evaluates interval `i` at local `t ∈ [-1, 1]`.
    pub fn eval_local(&self, i: usize, t: f64) -> f64 {
        match &self.pieces[i] {
            Piece::Coeffs(c) => c.eval_unchecked(t),
            Piece::Values(v) => v.interpolate(t).expect("local coordinate in range"),
        }
    }
}

pub fn eval_piecewise(sol: &PiecewiseSolution, y: f64) -> Result<f64> {
    sol.eval(y)
}

/// `n` Chebyshev-clustered local coordinates, both ends included.
pub fn clustered_local_samples(n: usize) -> Vec<f64> {
    let n = n.max(2);
    let h = PI / (2.0 * (n - 1) as f64);
    (0..n)
        .map(|j| (((n - 1) as f64 - 2.0 * j as f64) * h).sin())
        .collect()
}

/// Largest excursion of `sol` outside `[lo, hi]` over `samples` clustered
/// points per interval.
pub fn overshoot(sol: &PiecewiseSolution, lo: f64, hi: f64, samples: usize) -> f64 {
    let ts = clustered_local_samples(samples);
    let mut worst: f64 = 0.0;
    for i in 0..sol.grid.intervals() {
        for &t in &ts {
            let u = sol.eval_local(i, t);
            worst = worst.max(u - hi).max(lo - u);
        }
    }
    worst
}

/// Sup-norm distance to `exact` over `samples` clustered points split
/// evenly between the intervals. Samples are placed in `y` and mapped back,
/// so both sides see the same rounded point; inside a layer of width `δ`
/// the reverse order would cost `ulp(y)/δ` in accuracy.
pub fn sup_error(sol: &PiecewiseSolution, exact: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let per = samples.div_ceil(sol.grid.intervals());
    let ts = clustered_local_samples(per);
    let mut worst: f64 = 0.0;
    for i in 0..sol.grid.intervals() {
        for &t in &ts {
            let y = sol.grid.to_physical(i, t);
            let u = sol.eval_local(i, sol.grid.to_local(i, y));
            worst = worst.max((u - exact(y)).abs());
        }
    }
    worst
}

/// Largest error at the collocation points of every interval.
pub fn grid_error(sol: &PiecewiseSolution, exact: impl Fn(f64) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..sol.grid.intervals() {
        for y in sol.grid.physical_points(i) {
            let u = sol.eval_local(i, sol.grid.to_local(i, y));
            worst = worst.max((u - exact(y)).abs());
        }
    }
    worst
}

/// Largest jump across interior nodes of each of the first `orders`
/// matched quantities. For the spectral backend these are the chain levels
/// the interface rows equate; otherwise the value and physical derivatives
/// `1..orders` of the interpolant.
pub fn interface_jumps(sol: &PiecewiseSolution, orders: usize) -> Vec<f64> {
    let mut jumps = vec![0.0f64; orders];
    for i in 0..sol.grid.intervals().saturating_sub(1) {
        if !sol.levels.is_empty() {
            for (jump, (l, r)) in jumps.iter_mut().zip(sol.levels[i].iter().zip(&sol.levels[i + 1])) {
                *jump = jump.max((l.0 - r.1).abs());
            }
            continue;
        }
        let mut left = sol.coeffs(i);
        let mut right = sol.coeffs(i + 1);
        let (sl, sr) = (2.0 / sol.grid.width(i), 2.0 / sol.grid.width(i + 1));
        for (k, jump) in jumps.iter_mut().enumerate() {
            let l = left.endpoints().0 * sl.powi(k as i32);
            let r = right.endpoints().1 * sr.powi(k as i32);
            *jump = jump.max((l - r).abs());
            left = left.derivative();
            right = right.derivative();
        }
    }
    jumps
}

fn interface_error(e: Error) -> Error {
    match e {
        Error::Singular(_) => Error::DegenerateInterfaces,
        e => e,
    }
}

/// Spectral-integration backend, right-hand side given as a function of
/// the physical variable.
pub fn piecewise_solve_spectral(
    op: &OperatorFactorization,
    f: impl Fn(f64) -> f64,
    grid: &PiecewiseGrid,
    bcs: &[BoundaryCondition],
) -> Result<PiecewiseSolution> {
    let samples: Vec<GridValues> = (0..grid.intervals())
        .map(|i| GridValues::new(grid.physical_points(i).into_iter().map(&f).collect()))
        .collect::<Result<_>>()?;
    piecewise_solve_spectral_values(op, &samples, grid, bcs)
}

/// Spectral-integration backend with `f` sampled on each interval's grid.
pub fn piecewise_solve_spectral_values(
    op: &OperatorFactorization,
    f: &[GridValues],
    grid: &PiecewiseGrid,
    bcs: &[BoundaryCondition],
) -> Result<PiecewiseSolution> {
    let r = op.order();
    let n = grid.intervals();
    check_conditions(bcs, r)?;
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.len(),
        });
    }

    struct Local {
        solver: FactoredSolver,
        particular: Chain,
        stretch: f64,
    }
    let mut locals = Vec::with_capacity(n);
    for (i, fi) in f.iter().enumerate() {
        let m = grid.orders[i];
        if fi.order() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: fi.order(),
            });
        }
        let w = grid.width(i);
        let (local_op, rhs_scale) = rescale_operator(op, w)?;
        let solver = FactoredSolver::new(&local_op, m)?;
        let coeffs = fi.to_coeffs().scale(rhs_scale);
        let particular = solver.particular_chain(&coeffs)?;
        locals.push(Local {
            solver,
            particular,
            stretch: 2.0 / w,
        });
    }

    let size = r * n;
    let mut a = DenseMatrix::zeros(size, size);
    let mut rhs = vec![0.0; size];
    let mut floors = vec![0.0f64; size];

    for (row, bc) in bcs.iter().enumerate() {
        let i = match bc.endpoint() {
            Endpoint::Left => 0,
            Endpoint::Right => n - 1,
        };
        let local = &locals[i];
        let rows = EndpointRows::new(grid.orders[i], std::slice::from_ref(bc))?;
        for (h, chain) in local.solver.homogeneous_chains().iter().enumerate() {
            let u = chain.solution();
            let v = rows.values_for(u);
            a.set(row, i * r + h, rows.functional(bc, u, v.as_ref(), local.stretch));
            if n == 1 {
                floors[h] = floors[h].max(rows.noise_floor(bc, u, local.stretch));
            }
        }
        let p = local.particular.solution();
        let pv = rows.values_for(p);
        rhs[row] = bc.value() - rows.functional(bc, p, pv.as_ref(), local.stretch);
    }

    let mut row = r;
    for i in 0..n.saturating_sub(1) {
        let (left, right) = (&locals[i], &locals[i + 1]);
        let kinds = left.solver.level_kinds();
        for (k, &kind) in kinds.iter().enumerate() {
            let sl = left.stretch.powi(k as i32);
            let sr = right.stretch.powi(k as i32);
            for (h, chain) in left.solver.homogeneous_chains().iter().enumerate() {
                a.set(row, i * r + h, sl * chain.quantity_endpoints(k, kind).0);
            }
            for (h, chain) in right.solver.homogeneous_chains().iter().enumerate() {
                a.set(row, (i + 1) * r + h, -sr * chain.quantity_endpoints(k, kind).1);
            }
            let pl = sl * left.particular.quantity_endpoints(k, kind).0;
            let pr = sr * right.particular.quantity_endpoints(k, kind).1;
            rhs[row] = pr - pl;
            row += 1;
        }
    }

    let c = if n == 1 {
        solve_column_scaled(&a, &rhs, &floors).map_err(|e| match e {
            Error::Singular(_) => Error::DegenerateBoundaryConditions,
            e => e,
        })?
    } else {
        solve_column_scaled(&a, &rhs, &[]).map_err(interface_error)?
    };

    let mut pieces = Vec::with_capacity(n);
    let mut constants = Vec::with_capacity(n);
    let mut levels = Vec::with_capacity(n);
    for (i, local) in locals.iter().enumerate() {
        let ci = &c[i * r..(i + 1) * r];
        let basis: Vec<&ChebCoeffs> = local
            .solver
            .homogeneous_chains()
            .iter()
            .map(Chain::solution)
            .collect();
        pieces.push(Piece::Coeffs(combine(local.particular.solution(), &basis, ci)));
        constants.push(ci.to_vec());
        let kinds = local.solver.level_kinds();
        let chains = local.solver.homogeneous_chains();
        levels.push(
            kinds
                .iter()
                .enumerate()
                .map(|(k, &kind)| {
                    let (mut hi, mut lo) = local.particular.quantity_endpoints(k, kind);
                    for (chain, &cj) in chains.iter().zip(ci) {
                        let (h, l) = chain.quantity_endpoints(k, kind);
                        hi += cj * h;
                        lo += cj * l;
                    }
                    let s = local.stretch.powi(k as i32);
                    (s * hi, s * lo)
                })
                .collect(),
        );
    }
    Ok(PiecewiseSolution {
        grid: grid.clone(),
        pieces,
        constants,
        levels,
    })
}

/// Coefficient of one derivative term in the collocation backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Const(f64),
    /// `offset + slope * y` in the physical variable.
    Affine { offset: f64, slope: f64 },
}

impl Coefficient {
    pub fn at(self, y: f64) -> f64 {
        match self {
            Coefficient::Const(c) => c,
            Coefficient::Affine { offset, slope } => offset + slope * y,
        }
    }
}

/// `Σ p_d(y) D^d` with constant or affine `p_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseOperator {
    terms: Vec<(usize, Coefficient)>,
}

impl PointwiseOperator {
    pub fn new(terms: Vec<(usize, Coefficient)>) -> Result<Self> {
        let finite = terms.iter().all(|(_, c)| match c {
            Coefficient::Const(c) => c.is_finite(),
            Coefficient::Affine { offset, slope } => offset.is_finite() && slope.is_finite(),
        });
        if !finite {
            return Err(Error::InvalidOperator("non-finite coefficient".into()));
        }
        let op = Self { terms };
        if op.order() == 0 {
            return Err(Error::InvalidOperator(
                "operator has no derivative term".into(),
            ));
        }
        Ok(op)
    }

    pub fn terms(&self) -> &[(usize, Coefficient)] {
        &self.terms
    }

    pub fn order(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| *c != Coefficient::Const(0.0))
            .map(|&(d, _)| d)
            .max()
            .unwrap_or(0)
    }
}

/// Operator accepted by the collocation backend.
#[derive(Debug, Clone, PartialEq)]
pub enum CollocationOperator {
    Factored(OperatorFactorization),
    Pointwise(PointwiseOperator),
}

impl CollocationOperator {
    pub fn order(&self) -> usize {
        match self {
            CollocationOperator::Factored(op) => op.order(),
            CollocationOperator::Pointwise(op) => op.order(),
        }
    }

    fn terms(&self) -> Vec<(usize, Coefficient)> {
        match self {
            CollocationOperator::Factored(op) => op
                .polynomial()
                .into_iter()
                .enumerate()
                .map(|(d, p)| (d, Coefficient::Const(p)))
                .collect(),
            CollocationOperator::Pointwise(op) => op.terms.clone(),
        }
    }

    /// `Σ diag(p_d(y)) (D/s)^d` on one interval. Powers of `D` come from
    /// repeated products on small grids and from the transform route on
    /// large ones, where an `O(M³)` product would dominate.
    fn local_matrix(&self, m: usize, points: &[f64], half_width: f64) -> Result<DenseMatrix> {
        let terms = self.terms();
        let max = terms.iter().map(|&(d, _)| d).max().unwrap_or(0);
        let d = build_diffmat(m)?;
        let mut out = DenseMatrix::zeros(m + 1, m + 1);
        let mut add_power = |k: usize, power_col: &dyn Fn(usize) -> f64, col: usize| {
            for &(_, c) in terms.iter().filter(|(d, _)| *d == k) {
                for (j, &y) in points.iter().enumerate() {
                    let v = power_col(j);
                    if v != 0.0 {
                        out.set(j, col, out.get(j, col) + c.at(y) * v);
                    }
                }
            }
        };
        if m <= DIRECT_POWER_MAX {
            let scaled = build_operator_matrix(LocalOp::First(FirstOrderOp { a: 0.0 }), &d, half_width);
            let mut power = DenseMatrix::identity(m + 1);
            for k in 0..=max {
                for col in 0..=m {
                    add_power(k, &|j| power.get(j, col), col);
                }
                if k < max {
                    power = power.matmul(&scaled);
                }
            }
        } else {
            let spectral = SpectralDerivative::new(m)?;
            for col in 0..=m {
                let mut v = vec![0.0; m + 1];
                v[col] = 1.0;
                for k in 0..=max {
                    if k == 1 {
                        v = (0..=m).map(|j| d.matrix().get(j, col) / half_width).collect();
                    } else if k > 1 {
                        v = spectral.apply(&v);
                        v.iter_mut().for_each(|x| *x /= half_width);
                    }
                    add_power(k, &|j| v[j], col);
                }
            }
        }
        Ok(out)
    }
}

/// Largest grid order whose derivative powers are formed by dense products.
const DIRECT_POWER_MAX: usize = 128;

impl From<OperatorFactorization> for CollocationOperator {
    fn from(op: OperatorFactorization) -> Self {
        CollocationOperator::Factored(op)
    }
}

impl From<PointwiseOperator> for CollocationOperator {
    fn from(op: PointwiseOperator) -> Self {
        CollocationOperator::Pointwise(op)
    }
}

/// Largest dense collocation system assembled.
pub const DIFFMAT_LIMIT: usize = 8193;

/// Collocation backend. Unknowns are the grid values of all intervals with
/// interface values shared, numbered by increasing `y`.
pub fn piecewise_solve_diffmat(
    op: &CollocationOperator,
    f: impl Fn(f64) -> f64,
    grid: &PiecewiseGrid,
    bcs: &[BoundaryCondition],
) -> Result<PiecewiseSolution> {
    let r = op.order();
    let n = grid.intervals();
    check_conditions(bcs, r)?;
    if let Some(&m) = grid.orders.iter().find(|&&m| m < r) {
        return Err(Error::GridTooSmall { min: r, got: m });
    }
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for &m in &grid.orders {
        offsets.push(total);
        total += m;
    }
    let size = total + 1;
    if size > DIFFMAT_LIMIT {
        return Err(Error::TooLarge { size, limit: DIFFMAT_LIMIT });
    }
    // local index j runs from the right end (j = 0) to the left end (j = M)
    let global = |i: usize, j: usize| offsets[i] + grid.orders[i] - j;

    let mut a = DenseMatrix::zeros(size, size);
    let mut rhs = vec![0.0; size];
    let mut row = 0;

    let skip_right = r / 2;
    let skip_left = r - skip_right;
    for i in 0..n {
        let m = grid.orders[i];
        let points = grid.physical_points(i);
        let local = op.local_matrix(m, &points, 0.5 * grid.width(i))?;
        for j in skip_right..=m - skip_left {
            for (k, &v) in local.row(j).iter().enumerate() {
                a.set(row, global(i, k), v);
            }
            rhs[row] = f(points[j]);
            row += 1;
        }
    }

    for i in 0..n.saturating_sub(1) {
        let (ml, mr) = (grid.orders[i], grid.orders[i + 1]);
        let (sl, sr) = (2.0 / grid.width(i), 2.0 / grid.width(i + 1));
        for k in 1..r {
            let left = endpoint_row(ml, k, Endpoint::Right)?;
            let right = endpoint_row(mr, k, Endpoint::Left)?;
            let (fl, fr) = (sl.powi(k as i32), sr.powi(k as i32));
            for (j, v) in left.iter().enumerate() {
                let g = global(i, j);
                a.set(row, g, a.get(row, g) + fl * v);
            }
            for (j, v) in right.iter().enumerate() {
                let g = global(i + 1, j);
                a.set(row, g, a.get(row, g) - fr * v);
            }
            row += 1;
        }
    }

    for bc in bcs {
        let i = match bc.endpoint() {
            Endpoint::Left => 0,
            Endpoint::Right => n - 1,
        };
        let m = grid.orders[i];
        let s = 2.0 / grid.width(i);
        for &(d, w) in bc.weights() {
            let er = endpoint_row(m, d, bc.endpoint())?;
            let f = w * s.powi(d as i32);
            for (j, v) in er.iter().enumerate() {
                let g = global(i, j);
                a.set(row, g, a.get(row, g) + f * v);
            }
        }
        rhs[row] = bc.value();
        row += 1;
    }
    debug_assert_eq!(row, size);

    for i in 0..size {
        let s = a.row(i).iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if s > 0.0 {
            a.row_mut(i).iter_mut().for_each(|v| *v /= s);
            rhs[i] /= s;
        }
    }
    let lu = a.clone().factor().map_err(interface_error)?;
    let mut u = lu.solve(&rhs)?;
    // one refinement step; the interface rows mix very different scales
    let au = a.mul_vec(&u);
    let residual: Vec<f64> = rhs.iter().zip(&au).map(|(b, x)| b - x).collect();
    for (x, d) in u.iter_mut().zip(lu.solve(&residual)?) {
        *x += d;
    }

    let pieces = (0..n)
        .map(|i| {
            let vals = (0..=grid.orders[i]).map(|j| u[global(i, j)]).collect();
            GridValues::new(vals).map(Piece::Values)
        })
        .collect::<Result<_>>()?;
    Ok(PiecewiseSolution {
        grid: grid.clone(),
        pieces,
        constants: Vec::new(),
        levels: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factored::solve_bvp;

    fn quad(b: f64, c: f64) -> OperatorFactorization {
        OperatorFactorization::new(vec![], vec![SecondOrderOp { b, c }]).unwrap()
    }

    fn dirichlet(left: f64, right: f64) -> Vec<BoundaryCondition> {
        vec![
            BoundaryCondition::dirichlet(Endpoint::Left, left).unwrap(),
            BoundaryCondition::dirichlet(Endpoint::Right, right).unwrap(),
        ]
    }

    #[test]
    fn grid_validation_and_lookup() {
        assert!(PiecewiseGrid::new(vec![0.0, 0.0, 1.0], vec![8, 8]).is_err());
        assert!(PiecewiseGrid::new(vec![0.0, 1.0], vec![8, 8]).is_err());
        let g = PiecewiseGrid::new(vec![-1.0, 0.0, 1.0], vec![8, 8]).unwrap();
        assert_eq!(g.locate(0.0).unwrap(), (0, 1.0));
        assert_eq!(g.locate(-1.0).unwrap(), (0, -1.0));
        assert_eq!(g.locate(0.5).unwrap(), (1, 0.0));
        assert!(matches!(g.locate(1.5), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn rescaling() {
        let op = OperatorFactorization::new(
            vec![FirstOrderOp { a: 3.0 }],
            vec![SecondOrderOp { b: 2.0, c: 5.0 }],
        )
        .unwrap();
        let (same, s) = rescale_operator(&op, 2.0).unwrap();
        assert_eq!((same, s), (op.clone(), 1.0));
        let single = OperatorFactorization::new(vec![FirstOrderOp { a: 3.0 }], vec![]).unwrap();
        let (half, s) = rescale_operator(&single, 1.0).unwrap();
        assert_eq!(half.linear()[0].a, 1.5);
        assert_eq!(s, 0.5);
        let (q, s) = rescale_operator(&op, 0.5).unwrap();
        assert_eq!(q.quadratic()[0], SecondOrderOp { b: 0.5, c: 5.0 / 16.0 });
        assert_eq!(s, 0.25f64.powi(3));
        assert!(rescale_operator(&op, 0.0).is_err());
    }

    #[test]
    fn manufactured_on_shifted_interval() {
        // u = e^y sin 3y on [0, 1] with (D² + D - 2)
        let u = |y: f64| y.exp() * (3.0 * y).sin();
        let du = |y: f64| y.exp() * ((3.0 * y).sin() + 3.0 * (3.0 * y).cos());
        let d2u = |y: f64| y.exp() * (-8.0 * (3.0 * y).sin() + 6.0 * (3.0 * y).cos());
        let f = |y: f64| d2u(y) + du(y) - 2.0 * u(y);
        let grid = PiecewiseGrid::new(vec![0.0, 1.0], vec![24]).unwrap();
        let sol =
            piecewise_solve_spectral(&quad(1.0, -2.0), f, &grid, &dirichlet(u(0.0), u(1.0))).unwrap();
        assert!(sup_error(&sol, u, 2000) < 1e-12);
    }

    #[test]
    fn single_interval_matches_direct_solve_bitwise() {
        let op = OperatorFactorization::new(
            vec![FirstOrderOp { a: -4.0 }],
            vec![SecondOrderOp { b: 1.0, c: -9.0 }],
        )
        .unwrap();
        let f = |y: f64| (2.0 * y).cos() + y;
        let bcs = vec![
            BoundaryCondition::dirichlet(Endpoint::Left, 1.0).unwrap(),
            BoundaryCondition::derivative(Endpoint::Right, 1, -2.0).unwrap(),
            BoundaryCondition::new(Endpoint::Right, vec![(0, 1.0), (2, 0.5)], 0.25).unwrap(),
        ];
        let m = 20;
        let grid = PiecewiseGrid::single(m).unwrap();
        let pw = piecewise_solve_spectral(&op, f, &grid, &bcs).unwrap();
        let direct = solve_bvp(&op, &cheb_points(m).unwrap().sample(f).to_coeffs(), &bcs).unwrap();
        assert_eq!(pw.coeffs(0), direct.coeffs);
        assert_eq!(pw.constants()[0], direct.constants);
    }

    #[test]
    fn linear_solution_on_two_intervals() {
        let grid = PiecewiseGrid::new(vec![-1.0, 0.3, 1.0], vec![8, 6]).unwrap();
        let exact = |y: f64| 0.5 * (y + 1.0);
        let spec = piecewise_solve_spectral(&quad(0.0, 0.0), |_| 0.0, &grid, &dirichlet(0.0, 1.0))
            .unwrap();
        assert!(sup_error(&spec, exact, 500) < 1e-13);
        let op = CollocationOperator::from(quad(0.0, 0.0));
        let dm = piecewise_solve_diffmat(&op, |_| 0.0, &grid, &dirichlet(0.0, 1.0)).unwrap();
        assert!(sup_error(&dm, exact, 500) < 1e-13);
    }

    #[test]
    fn boundary_layer_on_three_intervals() {
        let a: f64 = 1e6;
        let exact = |y: f64| 1.0 + ((a * (y - 1.0)).exp() - (-2.0 * a).exp()) / -(-2.0 * a).exp_m1();
        let grid = PiecewiseGrid::new(vec![-1.0, 0.99995, 0.99999, 1.0], vec![32, 32, 32]).unwrap();
        // D(D - a): continuity is then imposed on the stored (D - a)u
        let op = OperatorFactorization::new(vec![FirstOrderOp { a: 0.0 }, FirstOrderOp { a }], vec![]).unwrap();
        let bcs = dirichlet(1.0, 2.0);
        let spec = piecewise_solve_spectral(&op, |_| 0.0, &grid, &bcs).unwrap();
        assert!(sup_error(&spec, exact, 10_000) < 1e-9);
        let jumps = interface_jumps(&spec, 1);
        assert!(jumps[0] < 1e-9 * 2.0);
        let dm = piecewise_solve_diffmat(&op.into(), |_| 0.0, &grid, &bcs).unwrap();
        assert!(sup_error(&dm, exact, 10_000) < 1e-9);
    }

    #[test]
    fn first_order_piecewise() {
        let op = OperatorFactorization::new(vec![FirstOrderOp { a: -50.0 }], vec![]).unwrap();
        let exact = |y: f64| -(-50.0 * (y + 1.0)).exp_m1();
        let grid = PiecewiseGrid::new(vec![-1.0, -0.8, 1.0], vec![60, 40]).unwrap();
        let bcs = vec![BoundaryCondition::dirichlet(Endpoint::Left, 0.0).unwrap()];
        let spec = piecewise_solve_spectral(&op, |_| 50.0, &grid, &bcs).unwrap();
        assert!(sup_error(&spec, exact, 4000) < 1e-11);
        let dm = piecewise_solve_diffmat(&op.into(), |_| 50.0, &grid, &bcs).unwrap();
        assert!(sup_error(&dm, exact, 4000) < 1e-10);
    }

    #[test]
    fn internal_layer_with_affine_coefficient() {
        let eps: f64 = 1e-4;
        let op = PointwiseOperator::new(vec![
            (2, Coefficient::Const(eps)),
            (1, Coefficient::Affine { offset: 0.0, slope: 1.0 }),
        ])
        .unwrap();
        let s = eps.sqrt();
        let grid = PiecewiseGrid::new(vec![-1.0, -8.0 * s, 8.0 * s, 1.0], vec![48, 64, 48]).unwrap();
        let sol = piecewise_solve_diffmat(&op.into(), |_| 0.0, &grid, &dirichlet(-1.0, 1.0)).unwrap();
        let k = (2.0 * eps).sqrt();
        let exact = |y: f64| libm::erf(y / k) / libm::erf(1.0 / k);
        assert!(sup_error(&sol, exact, 4000) < 1e-10);
        assert!(overshoot(&sol, -1.0, 1.0, 1000) < 1e-12);
    }

    #[test]
    fn overshoot_of_exact_linear_is_zero() {
        let grid = PiecewiseGrid::new(vec![0.0, 0.5, 1.0], vec![6, 6]).unwrap();
        let sol = piecewise_solve_spectral(&quad(0.0, 0.0), |_| 0.0, &grid, &dirichlet(0.0, 1.0))
            .unwrap();
        assert_eq!(overshoot(&sol, 0.0, 1.0, 1000), 0.0);
    }

    #[test]
    fn bad_inputs() {
        let grid = PiecewiseGrid::new(vec![-1.0, 0.0, 1.0], vec![8, 8]).unwrap();
        let one = vec![BoundaryCondition::dirichlet(Endpoint::Left, 0.0).unwrap()];
        assert!(piecewise_solve_spectral(&quad(0.0, 0.0), |_| 0.0, &grid, &one).is_err());
        let tiny = PiecewiseGrid::new(vec![-1.0, 0.0, 1.0], vec![3, 8]).unwrap();
        assert!(matches!(
            piecewise_solve_spectral(&quad(0.0, 0.0), |_| 0.0, &tiny, &dirichlet(0.0, 1.0)),
            Err(Error::GridTooSmall { .. })
        ));
    }
}
