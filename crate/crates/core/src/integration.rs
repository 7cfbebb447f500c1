//! First- and second-order spectral integration.
//!
//! `(D - a) u = f` is integrated once and `(D² + bD + c) u = f` twice. The
//! integration constants only touch the `T_0` (and `T_1`) coefficients, so
//! equating coefficients of `T_n` for `n >= 1` (resp. `n >= 2`) never sees
//! them. Fixing the leading coefficients of `u` through integral conditions
//! instead of boundary values therefore leaves a tridiagonal (resp.
//! pentadiagonal) system for the remaining coefficients.
//!
//! Homogeneous solutions are obtained as `T_j + u*` where `u*` is a
//! particular solution with right-hand side `-L T_j`, solved against the same
//! factorization. Computing them from characteristic roots instead would
//! break the cancellation that lets the final combination be accurate on a
//! grid that resolves only the solution, not the Green's function.

use crate::banded::{BandedLu, BandedMatrix};
use crate::chebyshev::ChebCoeffs;
use crate::error::{Error, Result};

pub const FIRST_ORDER_MIN_M: usize = 3;
pub const SECOND_ORDER_MIN_M: usize = 5;

/// The factor `D - a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderOp {
    pub a: f64,
}

impl FirstOrderOp {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidOperator(format!(
                "linear factor coefficient {a} is not finite"
            )));
        }
        Ok(Self { a })
    }
}

/// The factor `D² + bD + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderOp {
    pub b: f64,
    pub c: f64,
}

impl SecondOrderOp {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !b.is_finite() || !c.is_finite() {
            return Err(Error::InvalidOperator(format!(
                "quadratic factor coefficients ({b}, {c}) are not finite"
            )));
        }
        Ok(Self { b, c })
    }
}

fn check_order(m: usize, min: usize) -> Result<()> {
    if m < min {
        Err(Error::GridTooSmall { min, got: m })
    } else {
        Ok(())
    }
}

/// Tridiagonal system for `a_1 .. a_{M-1}` of `u - a∫u = ∫f` with `a_0 = 0`.
pub fn first_order_matrix(op: FirstOrderOp, m: usize) -> Result<BandedMatrix> {
    check_order(m, FIRST_ORDER_MIN_M)?;
    let size = m - 1;
    let mut mat = BandedMatrix::zeros(size, 1, 1);
    for n in 1..m {
        let row = n - 1;
        let w = op.a / (2.0 * n as f64);
        mat.set(row, row, 1.0);
        if n >= 2 {
            mat.set(row, row - 1, -w);
        }
        if n + 1 < m {
            mat.set(row, row + 1, w);
        }
    }
    Ok(mat)
}

/// Pentadiagonal system for `a_2 .. a_{M-1}` of `u + b∫u + c∫∫u = ∫∫f`
/// with `a_0 = a_1 = 0`.
pub fn second_order_matrix(op: SecondOrderOp, m: usize) -> Result<BandedMatrix> {
    check_order(m, SECOND_ORDER_MIN_M)?;
    let size = m - 2;
    let mut mat = BandedMatrix::zeros(size, 2, 2);
    for n in 2..m {
        let row = n - 2;
        let nf = n as f64;
        let lin = op.b / (2.0 * nf);
        if n >= 4 {
            mat.set(row, row - 2, op.c / (4.0 * nf * (nf - 1.0)));
        }
        if n >= 3 {
            mat.set(row, row - 1, lin);
        }
        mat.set(row, row, 1.0 - op.c / (2.0 * (nf * nf - 1.0)));
        if n + 1 < m {
            mat.set(row, row + 1, -lin);
        }
        if n + 2 < m {
            mat.set(row, row + 2, op.c / (4.0 * nf * (nf + 1.0)));
        }
    }
    Ok(mat)
}

fn check_rhs(m: usize, f: &ChebCoeffs) -> Result<()> {
    if f.order() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: f.order(),
        });
    }
    Ok(())
}

/// A factored first-order operator on a fixed grid order, reused for the
/// particular and the homogeneous solve.
#[derive(Debug, Clone)]
pub struct FirstOrderSolver {
    op: FirstOrderOp,
    m: usize,
    lu: BandedLu,
}

impl FirstOrderSolver {
    pub fn new(op: FirstOrderOp, m: usize) -> Result<Self> {
        let lu = first_order_matrix(op, m)?.factor()?;
        Ok(Self { op, m, lu })
    }

    pub fn op(&self) -> FirstOrderOp {
        self.op
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Solution of `(D - a) u = f` with `T_0(u) = 0`.
    pub fn particular(&self, f: &ChebCoeffs) -> Result<ChebCoeffs> {
        check_rhs(self.m, f)?;
        let rhs = f.integrate();
        let x = self.lu.solve(&rhs.as_slice()[1..self.m])?;
        let mut u = vec![0.0; self.m + 1];
        u[1..self.m].copy_from_slice(&x);
        ChebCoeffs::new(u)
    }

    /// Solution of `(D - a) u = 0` with `T_0(u) = 1`, i.e. stored `a_0 = 1`.
    pub fn homogeneous(&self) -> Result<ChebCoeffs> {
        // (D - a)(1/2) = -a/2, so the correction solves (D - a) u* = a/2
        let star = self.particular(&ChebCoeffs::constant(self.m, 0.5 * self.op.a))?;
        let mut u = star.into_vec();
        u[0] = 1.0;
        ChebCoeffs::new(u)
    }
}

/// A factored second-order operator on a fixed grid order.
#[derive(Debug, Clone)]
pub struct SecondOrderSolver {
    op: SecondOrderOp,
    m: usize,
    lu: BandedLu,
}

impl SecondOrderSolver {
    pub fn new(op: SecondOrderOp, m: usize) -> Result<Self> {
        let lu = second_order_matrix(op, m)?.factor()?;
        Ok(Self { op, m, lu })
    }

    pub fn op(&self) -> SecondOrderOp {
        self.op
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Solution of `(D² + bD + c) u = f` with `T_0(u) = T_1(u) = 0`.
    pub fn particular(&self, f: &ChebCoeffs) -> Result<ChebCoeffs> {
        check_rhs(self.m, f)?;
        let rhs = f.double_integrate();
        let x = self.lu.solve(&rhs.as_slice()[2..self.m])?;
        let mut u = vec![0.0; self.m + 1];
        u[2..self.m].copy_from_slice(&x);
        ChebCoeffs::new(u)
    }

    /// Homogeneous solution with `T_0 = 1`, `T_1 = 0`.
    pub fn homogeneous_1(&self) -> Result<ChebCoeffs> {
        let star = self.particular(&ChebCoeffs::constant(self.m, -0.5 * self.op.c))?;
        let mut u = star.into_vec();
        u[0] = 1.0;
        ChebCoeffs::new(u)
    }

    /// Homogeneous solution with `T_0 = 0`, `T_1 = 1`.
    pub fn homogeneous_2(&self) -> Result<ChebCoeffs> {
        // L T_1 = b + c y
        let mut f = vec![0.0; self.m + 1];
        f[0] = -2.0 * self.op.b;
        f[1] = -self.op.c;
        let star = self.particular(&ChebCoeffs::new(f)?)?;
        let mut u = star.into_vec();
        u[1] = 1.0;
        ChebCoeffs::new(u)
    }
}

pub fn first_order_particular(op: FirstOrderOp, f: &ChebCoeffs) -> Result<ChebCoeffs> {
    FirstOrderSolver::new(op, f.order())?.particular(f)
}

pub fn first_order_homogeneous(op: FirstOrderOp, m: usize) -> Result<ChebCoeffs> {
    FirstOrderSolver::new(op, m)?.homogeneous()
}

pub fn second_order_particular(op: SecondOrderOp, f: &ChebCoeffs) -> Result<ChebCoeffs> {
    SecondOrderSolver::new(op, f.order())?.particular(f)
}

pub fn second_order_homogeneous_1(op: SecondOrderOp, m: usize) -> Result<ChebCoeffs> {
    SecondOrderSolver::new(op, m)?.homogeneous_1()
}

pub fn second_order_homogeneous_2(op: SecondOrderOp, m: usize) -> Result<ChebCoeffs> {
    SecondOrderSolver::new(op, m)?.homogeneous_2()
}
