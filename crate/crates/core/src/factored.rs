//! Higher-order operators in factored form.
//!
//! `L = (D - a_1)..(D - a_m)(D² + b_1 D + c_1)..(D² + b_n D + c_n)` is solved
//! as a chain of first- and second-order problems, each under integral
//! conditions. Solving `F_1 v = f`, then `F_2 w = v`, and so on leaves a
//! sequence of intermediates; the one obtained after factor `i` carries
//! `L_i = r - (order of F_1..F_i)` "derivatives" relative to the final
//! solution at level 0. One particular and `r` homogeneous chains are
//! combined at the end to satisfy the boundary conditions.

use crate::banded::DenseMatrix;
use crate::chebyshev::{ChebCoeffs, Endpoint, GridValues};
use crate::diffmat::{endpoint_row, LocalOp};
use crate::error::{Error, Result};
use crate::integration::{FirstOrderOp, FirstOrderSolver, SecondOrderOp, SecondOrderSolver};

/// `(D - a_1)..(D - a_m)(D² + b_1 D + c_1)..`, applied left to right in the
/// order given.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFactorization {
    linear: Vec<FirstOrderOp>,
    quadratic: Vec<SecondOrderOp>,
}

impl OperatorFactorization {
    pub fn new(linear: Vec<FirstOrderOp>, quadratic: Vec<SecondOrderOp>) -> Result<Self> {
        if linear.is_empty() && quadratic.is_empty() {
            return Err(Error::InvalidOperator("operator has no factors".into()));
        }
        for f in &linear {
            FirstOrderOp::new(f.a)?;
        }
        for q in &quadratic {
            SecondOrderOp::new(q.b, q.c)?;
        }
        Ok(Self { linear, quadratic })
    }

    pub fn linear(&self) -> &[FirstOrderOp] {
        &self.linear
    }

    pub fn quadratic(&self) -> &[SecondOrderOp] {
        &self.quadratic
    }

    pub fn order(&self) -> usize {
        self.linear.len() + 2 * self.quadratic.len()
    }

    /// Factors in solve order: linear ones first.
    pub fn factors(&self) -> Vec<LocalOp> {
        self.linear
            .iter()
            .map(|&f| LocalOp::First(f))
            .chain(self.quadratic.iter().map(|&q| LocalOp::Second(q)))
            .collect()
    }

    /// Level of the intermediate produced by each factor.
    pub fn factor_levels(&self) -> Vec<usize> {
        let mut level = self.order();
        self.factors()
            .iter()
            .map(|f| {
                level -= factor_order(f);
                level
            })
            .collect()
    }

    /// `L u`, computed in coefficient space.
    pub fn apply(&self, u: &ChebCoeffs) -> ChebCoeffs {
        self.factors().iter().rev().fold(u.clone(), |v, f| match *f {
            LocalOp::First(FirstOrderOp { a }) => v.derivative().axpy(-a, &v),
            LocalOp::Second(SecondOrderOp { b, c }) => {
                let dv = v.derivative();
                dv.derivative().axpy(b, &dv).axpy(c, &v)
            }
        })
    }

    /// Coefficients `p_0..p_r` of `L = Σ p_k D^k`.
    pub fn polynomial(&self) -> Vec<f64> {
        let mut p = vec![1.0];
        for f in self.factors() {
            let q: Vec<f64> = match f {
                LocalOp::First(FirstOrderOp { a }) => vec![-a, 1.0],
                LocalOp::Second(SecondOrderOp { b, c }) => vec![c, b, 1.0],
            };
            let mut out = vec![0.0; p.len() + q.len() - 1];
            for (i, x) in p.iter().enumerate() {
                for (j, y) in q.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            p = out;
        }
        p
    }
}

fn factor_order(f: &LocalOp) -> usize {
    match f {
        LocalOp::First(_) => 1,
        LocalOp::Second(_) => 2,
    }
}

/// How the level-`k` quantity of a chain is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelKind {
    /// Produced directly by a factor.
    Stored,
    /// Inside a quadratic factor: the derivative of level `k - 1`.
    Derivative,
}

/// Intermediates of one chain, indexed by level `0..r`. Levels a chain never
/// reaches are `None` and count as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    levels: Vec<Option<ChebCoeffs>>,
}

impl Chain {
    pub fn level(&self, k: usize) -> Option<&ChebCoeffs> {
        self.levels.get(k).and_then(Option::as_ref)
    }

    /// Level 0, the solution itself. Every complete chain has one.
    pub fn solution(&self) -> &ChebCoeffs {
        self.levels[0].as_ref().expect("chain without level 0")
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `(q(+1), q(-1))` for the level-`k` quantity `q`.
    pub fn quantity_endpoints(&self, k: usize, kind: LevelKind) -> (f64, f64) {
        match kind {
            LevelKind::Stored => self.level(k).map_or((0.0, 0.0), ChebCoeffs::endpoints),
            LevelKind::Derivative => self
                .level(k - 1)
                .map_or((0.0, 0.0), ChebCoeffs::endpoint_derivatives),
        }
    }
}

/// A particular chain, `r` homogeneous chains and, once fitted, the
/// combination constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSolution {
    pub particular: Chain,
    pub homogeneous: Vec<Chain>,
    pub combo: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
enum FactorSolver {
    First(FirstOrderSolver),
    Second(SecondOrderSolver),
}

impl FactorSolver {
    fn particular(&self, f: &ChebCoeffs) -> Result<ChebCoeffs> {
        match self {
            FactorSolver::First(s) => s.particular(f),
            FactorSolver::Second(s) => s.particular(f),
        }
    }
}

/// Factorizations and homogeneous chains for one operator on one grid order,
/// reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct FactoredSolver {
    op: OperatorFactorization,
    m: usize,
    solvers: Vec<FactorSolver>,
    factor_levels: Vec<usize>,
    kinds: Vec<LevelKind>,
    homogeneous: Vec<Chain>,
}

impl FactoredSolver {
    pub fn new(op: &OperatorFactorization, m: usize) -> Result<Self> {
        let r = op.order();
        if m < r + 3 {
            return Err(Error::GridTooSmall { min: r + 3, got: m });
        }
        let solvers = op
            .factors()
            .into_iter()
            .map(|f| {
                Ok(match f {
                    LocalOp::First(f) => FactorSolver::First(FirstOrderSolver::new(f, m)?),
                    LocalOp::Second(q) => FactorSolver::Second(SecondOrderSolver::new(q, m)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let factor_levels = op.factor_levels();
        let mut kinds = vec![LevelKind::Derivative; r];
        for &l in &factor_levels {
            kinds[l] = LevelKind::Stored;
        }
        let mut solver = Self {
            op: op.clone(),
            m,
            solvers,
            factor_levels,
            kinds,
            homogeneous: Vec::with_capacity(r),
        };
        for i in 0..solver.solvers.len() {
            let starts = match &solver.solvers[i] {
                FactorSolver::First(s) => vec![s.homogeneous()?],
                FactorSolver::Second(s) => vec![s.homogeneous_1()?, s.homogeneous_2()?],
            };
            for start in starts {
                let chain = solver.push_through(i, start)?;
                solver.homogeneous.push(chain);
            }
        }
        Ok(solver)
    }

    pub fn operator(&self) -> &OperatorFactorization {
        &self.op
    }

    pub fn grid_order(&self) -> usize {
        self.m
    }

    pub fn level_kinds(&self) -> &[LevelKind] {
        &self.kinds
    }

    /// Chain for homogeneous solution `h` (numbered from 1).
    pub fn homogeneous_chain(&self, h: usize) -> Result<&Chain> {
        if h == 0 || h > self.homogeneous.len() {
            return Err(Error::InvalidOperator(format!(
                "homogeneous index {h} outside 1..={}",
                self.homogeneous.len()
            )));
        }
        Ok(&self.homogeneous[h - 1])
    }

    pub fn homogeneous_chains(&self) -> &[Chain] {
        &self.homogeneous
    }

    pub fn particular_chain(&self, f: &ChebCoeffs) -> Result<Chain> {
        if f.order() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: f.order(),
            });
        }
        let first = self.solvers[0].particular(f)?;
        self.push_through(0, first)
    }

    pub fn chain_solution(&self, f: &ChebCoeffs) -> Result<ChainSolution> {
        Ok(ChainSolution {
            particular: self.particular_chain(f)?,
            homogeneous: self.homogeneous.clone(),
            combo: None,
        })
    }

    // `start` is the intermediate produced by factor `i`
    fn push_through(&self, i: usize, start: ChebCoeffs) -> Result<Chain> {
        let mut levels = vec![None; self.op.order()];
        let mut current = start;
        for j in i + 1..self.solvers.len() {
            let next = self.solvers[j].particular(&current)?;
            levels[self.factor_levels[j - 1]] = Some(current);
            current = next;
        }
        levels[*self.factor_levels.last().unwrap()] = Some(current);
        Ok(Chain { levels })
    }
}

pub fn solve_particular_chain(op: &OperatorFactorization, f: &ChebCoeffs) -> Result<Chain> {
    FactoredSolver::new(op, f.order())?.particular_chain(f)
}

pub fn solve_homogeneous_chain(op: &OperatorFactorization, h: usize, m: usize) -> Result<Chain> {
    FactoredSolver::new(op, m)?.homogeneous_chain(h).cloned()
}

/// `Σ w_k u^(d_k)(endpoint) = value`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    endpoint: Endpoint,
    weights: Vec<(usize, f64)>,
    value: f64,
}

impl BoundaryCondition {
    pub fn new(endpoint: Endpoint, weights: Vec<(usize, f64)>, value: f64) -> Result<Self> {
        if !weights.iter().any(|&(_, w)| w != 0.0) {
            return Err(Error::InvalidBoundaryCondition(
                "boundary condition has no nonzero weight".into(),
            ));
        }
        if !value.is_finite() || weights.iter().any(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidBoundaryCondition(
                "boundary condition has a non-finite entry".into(),
            ));
        }
        Ok(Self {
            endpoint,
            weights,
            value,
        })
    }

    pub fn dirichlet(endpoint: Endpoint, value: f64) -> Result<Self> {
        Self::new(endpoint, vec![(0, 1.0)], value)
    }

    /// `u^(d)(endpoint) = value`.
    pub fn derivative(endpoint: Endpoint, d: usize, value: f64) -> Result<Self> {
        Self::new(endpoint, vec![(d, 1.0)], value)
    }

    pub fn endpoint(&self) -> Endpoint {
        self.endpoint
    }

    pub fn weights(&self) -> &[(usize, f64)] {
        &self.weights
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn max_derivative(&self) -> usize {
        self.weights.iter().map(|&(d, _)| d).max().unwrap_or(0)
    }
}

pub(crate) fn check_conditions(bcs: &[BoundaryCondition], r: usize) -> Result<()> {
    if bcs.len() != r {
        return Err(Error::InvalidBoundaryCondition(format!(
            "bc count mismatch: operator of order {r} needs {r}, got {}",
            bcs.len()
        )));
    }
    if let Some(bc) = bcs.iter().find(|bc| bc.max_derivative() >= r) {
        return Err(Error::InvalidBoundaryCondition(format!(
            "derivative order {} not below operator order {r}",
            bc.max_derivative()
        )));
    }
    Ok(())
}

/// Endpoint rows of powers of the differentiation matrix needed by a set of
/// boundary conditions on one grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointRows {
    m: usize,
    rows: Vec<((Endpoint, usize), Vec<f64>)>,
}

impl EndpointRows {
    pub fn new(m: usize, bcs: &[BoundaryCondition]) -> Result<Self> {
        let mut rows: Vec<((Endpoint, usize), Vec<f64>)> = Vec::new();
        for bc in bcs {
            for &(d, _) in &bc.weights {
                let key = (bc.endpoint, d);
                if d > 0 && !rows.iter().any(|(k, _)| *k == key) {
                    rows.push((key, endpoint_row(m, d, bc.endpoint)?));
                }
            }
        }
        Ok(Self { m, rows })
    }

    pub fn grid_order(&self) -> usize {
        self.m
    }

    fn needs_values(&self) -> bool {
        !self.rows.is_empty()
    }

    fn row(&self, end: Endpoint, d: usize) -> &[f64] {
        &self
            .rows
            .iter()
            .find(|(k, _)| *k == (end, d))
            .expect("endpoint row was not prepared")
            .1
    }

    /// Left side of `bc` applied to `u`, with derivatives scaled by
    /// `stretch^d` for intervals that are not `[-1, 1]`.
    pub(crate) fn functional(
        &self,
        bc: &BoundaryCondition,
        u: &ChebCoeffs,
        values: Option<&GridValues>,
        stretch: f64,
    ) -> f64 {
        let mut acc = 0.0;
        for &(d, w) in &bc.weights {
            let q = if d == 0 {
                let (plus, minus) = u.endpoints();
                match bc.endpoint {
                    Endpoint::Right => plus,
                    Endpoint::Left => minus,
                }
            } else {
                let v = values.expect("grid values required for derivative rows");
                self.row(bc.endpoint, d)
                    .iter()
                    .zip(v.as_slice())
                    .map(|(r, x)| r * x)
                    .sum()
            };
            acc += w * stretch.powi(d as i32) * q;
        }
        acc
    }

    /// Roundoff level of [`Self::functional`] for `u`: the Markov bound
    /// `|u^(d)(±1)| <= ‖a‖₁ T_M^(d)(1)` times a small multiple of ε. A
    /// column of boundary functionals below this everywhere is zero.
    pub(crate) fn noise_floor(&self, bc: &BoundaryCondition, u: &ChebCoeffs, stretch: f64) -> f64 {
        let norm: f64 = u.as_slice().iter().map(|a| a.abs()).sum();
        let m2 = (self.m * self.m) as f64;
        bc.weights
            .iter()
            .map(|&(d, w)| {
                let markov: f64 = (0..d).map(|k| (m2 - (k * k) as f64) / (2 * k + 1) as f64).product();
                w.abs() * stretch.powi(d as i32) * markov
            })
            .sum::<f64>()
            * norm
            * BOUNDARY_NOISE
    }

    pub(crate) fn values_for(&self, u: &ChebCoeffs) -> Option<GridValues> {
        self.needs_values().then(|| u.to_values())
    }
}

const BOUNDARY_NOISE: f64 = 100.0 * f64::EPSILON;

/// Dense solve after scaling every column to unit max-norm; the constants
/// of different basis functions can differ by many orders of magnitude.
/// Column `j` counts as zero when its max-norm does not exceed `floors[j]`
/// (missing entries are 0).
pub(crate) fn solve_column_scaled(a: &DenseMatrix, rhs: &[f64], floors: &[f64]) -> Result<Vec<f64>> {
    let n = a.cols();
    let mut scaled = a.clone();
    let mut scales = vec![0.0; n];
    for (j, s) in scales.iter_mut().enumerate() {
        *s = (0..a.rows()).map(|i| a.get(i, j).abs()).fold(0.0, f64::max);
        if *s <= floors.get(j).copied().unwrap_or(0.0) || !s.is_finite() {
            return Err(Error::Singular(j));
        }
    }
    for i in 0..a.rows() {
        for (v, s) in scaled.row_mut(i).iter_mut().zip(&scales) {
            *v /= s;
        }
    }
    let z = scaled.solve(rhs)?;
    Ok(z.iter().zip(&scales).map(|(z, s)| z / s).collect())
}

/// Solution of a boundary value problem on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub coeffs: ChebCoeffs,
    pub constants: Vec<f64>,
}

impl Solution {
    pub fn eval(&self, y: f64) -> Result<f64> {
        self.coeffs.eval(y)
    }
}

/// `u^p + Σ C_h ū^h` in coefficient space, in index order.
pub(crate) fn combine(particular: &ChebCoeffs, basis: &[&ChebCoeffs], constants: &[f64]) -> ChebCoeffs {
    basis
        .iter()
        .zip(constants)
        .fold(particular.clone(), |u, (b, &c)| u.axpy(c, b))
}

/// Fits the combination constants of `chain` to `bcs`.
pub fn fit_boundary(
    chain: &mut ChainSolution,
    bcs: &[BoundaryCondition],
    rows: &EndpointRows,
) -> Result<Solution> {
    let r = chain.homogeneous.len();
    check_conditions(bcs, r)?;
    let basis: Vec<&ChebCoeffs> = chain.homogeneous.iter().map(Chain::solution).collect();
    let values: Vec<Option<GridValues>> = basis.iter().map(|u| rows.values_for(u)).collect();
    let mut a = DenseMatrix::zeros(r, r);
    let mut floors = vec![0.0f64; r];
    for (i, bc) in bcs.iter().enumerate() {
        for (j, (u, v)) in basis.iter().zip(&values).enumerate() {
            a.set(i, j, rows.functional(bc, u, v.as_ref(), 1.0));
            floors[j] = floors[j].max(rows.noise_floor(bc, u, 1.0));
        }
    }
    let particular = chain.particular.solution();
    let pv = rows.values_for(particular);
    let rhs: Vec<f64> = bcs
        .iter()
        .map(|bc| bc.value - rows.functional(bc, particular, pv.as_ref(), 1.0))
        .collect();
    let constants = solve_column_scaled(&a, &rhs, &floors).map_err(|e| match e {
        Error::Singular(_) => Error::DegenerateBoundaryConditions,
        e => e,
    })?;
    let coeffs = combine(particular, &basis, &constants);
    chain.combo = Some(constants.clone());
    Ok(Solution { coeffs, constants })
}

/// Operator, boundary conditions and grid order prepared once; each
/// [`BvpSolver::solve`] then costs one particular chain and an `r × r` solve.
#[derive(Debug, Clone)]
pub struct BvpSolver {
    factored: FactoredSolver,
    bcs: Vec<BoundaryCondition>,
    rows: EndpointRows,
    system: DenseMatrix,
    floors: Vec<f64>,
}

impl BvpSolver {
    pub fn new(op: &OperatorFactorization, bcs: &[BoundaryCondition], m: usize) -> Result<Self> {
        check_conditions(bcs, op.order())?;
        let factored = FactoredSolver::new(op, m)?;
        let rows = EndpointRows::new(m, bcs)?;
        let r = op.order();
        let mut system = DenseMatrix::zeros(r, r);
        let mut floors = vec![0.0f64; r];
        for (j, h) in factored.homogeneous_chains().iter().enumerate() {
            let u = h.solution();
            let v = rows.values_for(u);
            for (i, bc) in bcs.iter().enumerate() {
                system.set(i, j, rows.functional(bc, u, v.as_ref(), 1.0));
                floors[j] = floors[j].max(rows.noise_floor(bc, u, 1.0));
            }
        }
        Ok(Self {
            factored,
            bcs: bcs.to_vec(),
            rows,
            system,
            floors,
        })
    }

    pub fn factored(&self) -> &FactoredSolver {
        &self.factored
    }

    pub fn grid_order(&self) -> usize {
        self.factored.grid_order()
    }

    pub fn solve(&self, f: &ChebCoeffs) -> Result<Solution> {
        let particular = self.factored.particular_chain(f)?;
        let p = particular.solution();
        let pv = self.rows.values_for(p);
        let rhs: Vec<f64> = self
            .bcs
            .iter()
            .map(|bc| bc.value - self.rows.functional(bc, p, pv.as_ref(), 1.0))
            .collect();
        let constants = solve_column_scaled(&self.system, &rhs, &self.floors).map_err(|e| match e {
            Error::Singular(_) => Error::DegenerateBoundaryConditions,
            e => e,
        })?;
        let basis: Vec<&ChebCoeffs> = self
            .factored
            .homogeneous_chains()
            .iter()
            .map(Chain::solution)
            .collect();
        let coeffs = combine(p, &basis, &constants);
        Ok(Solution { coeffs, constants })
    }
}

/// Solves `L u = f` on `[-1, 1]` subject to `bcs`, on the grid order of `f`.
pub fn solve_bvp(
    op: &OperatorFactorization,
    f: &ChebCoeffs,
    bcs: &[BoundaryCondition],
) -> Result<Solution> {
    BvpSolver::new(op, bcs, f.order())?.solve(f)
}
