//! Chebyshev collocation differentiation matrices.
//!
//! Off-diagonal entries use `y_j - y_k` written as a product of sines, so
//! that nearby points near `±1` do not lose digits to cancellation, and the
//! diagonal is the negated off-diagonal row sum.

use std::f64::consts::PI;
use std::sync::Arc;

use rustdct::{Dct1, DctPlanner};

use crate::banded::DenseMatrix;
use crate::chebyshev::Endpoint;
use crate::error::{Error, Result};
use crate::integration::{FirstOrderOp, SecondOrderOp};

/// First-derivative matrix on the grid of order `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffMatrix {
    m: usize,
    entries: DenseMatrix,
}

impl DiffMatrix {
    pub fn order(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.entries
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        self.entries.mul_vec(values)
    }
}

/// Entry generator shared by the dense builder and the matrix-free rows.
struct Entries {
    m: usize,
    half_sines: Vec<f64>,
}

impl Entries {
    fn new(m: usize) -> Self {
        let h = PI / (2.0 * m as f64);
        let half_sines = (0..=2 * m).map(|j| (j as f64 * h).sin()).collect();
        Self { m, half_sines }
    }

    // y_i - y_k = 2 sin((i+k)π/2M) sin((k-i)π/2M)
    fn offdiag(&self, i: usize, k: usize) -> f64 {
        let diff = if k > i {
            2.0 * self.half_sines[i + k] * self.half_sines[k - i]
        } else {
            -2.0 * self.half_sines[i + k] * self.half_sines[i - k]
        };
        let ci = if i == 0 || i == self.m { 2.0 } else { 1.0 };
        let ck = if k == 0 || k == self.m { 2.0 } else { 1.0 };
        let sign = if (i + k).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * ci / (ck * diff)
    }

    fn row(&self, i: usize) -> Vec<f64> {
        let mut row = vec![0.0; self.m + 1];
        let mut sum = 0.0;
        for (k, r) in row.iter_mut().enumerate() {
            if k != i {
                *r = self.offdiag(i, k);
                sum += *r;
            }
        }
        row[i] = -sum;
        row
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..=self.m)
            .map(|i| {
                let mut sum = 0.0;
                for k in 0..=self.m {
                    if k != i {
                        sum += self.offdiag(i, k);
                    }
                }
                -sum
            })
            .collect()
    }
}

pub fn build_diffmat(m: usize) -> Result<DiffMatrix> {
    if m < 1 {
        return Err(Error::GridTooSmall { min: 1, got: m });
    }
    let gen = Entries::new(m);
    let mut entries = DenseMatrix::zeros(m + 1, m + 1);
    for i in 0..=m {
        entries.row_mut(i).copy_from_slice(&gen.row(i));
    }
    Ok(DiffMatrix { m, entries })
}

/// Row of `D^d` belonging to `end`, without forming `D`.
///
/// `d = 1` costs `O(M)`; each further power costs `O(M²)` but only `O(M)`
/// memory, so derivative boundary rows stay usable on very fine grids.
pub fn endpoint_row(m: usize, d: usize, end: Endpoint) -> Result<Vec<f64>> {
    if m < 1 {
        return Err(Error::GridTooSmall { min: 1, got: m });
    }
    let idx = end.grid_index(m);
    if d == 0 {
        let mut row = vec![0.0; m + 1];
        row[idx] = 1.0;
        return Ok(row);
    }
    let gen = Entries::new(m);
    let mut row = gen.row(idx);
    if d == 1 {
        return Ok(row);
    }
    let diag = gen.diagonal();
    for _ in 1..d {
        let next = (0..=m)
            .map(|k| {
                let mut acc = 0.0;
                for (i, &r) in row.iter().enumerate() {
                    acc += r * if i == k { diag[k] } else { gen.offdiag(i, k) };
                }
                acc
            })
            .collect();
        row = next;
    }
    Ok(row)
}

/// Applies `D` to grid values through the coefficients of the full
/// degree-`M` interpolant; the same map as [`DiffMatrix`] in `O(M log M)`.
pub struct SpectralDerivative {
    m: usize,
    plan: Arc<dyn Dct1<f64>>,
}

impl SpectralDerivative {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::GridTooSmall { min: 1, got: m });
        }
        let plan = DctPlanner::new().plan_dct1(m + 1);
        Ok(Self { m, plan })
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut c = values.to_vec();
        self.plan.process_dct1(&mut c);
        let scale = 2.0 / m as f64;
        c.iter_mut().for_each(|x| *x *= scale);
        c[m] *= 0.5;
        let mut d = vec![0.0; m + 2];
        for k in (1..=m).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
        }
        d.truncate(m + 1);
        self.plan.process_dct1(&mut d);
        d
    }
}

/// A constant-coefficient factor to be collocated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalOp {
    First(FirstOrderOp),
    Second(SecondOrderOp),
}

/// `(D/s)² + b(D/s) + c` or `(D/s) - a` on the local grid, with `s` the
/// half-width of the physical interval.
pub fn build_operator_matrix(op: LocalOp, d: &DiffMatrix, scale: f64) -> DenseMatrix {
    let n = d.order() + 1;
    let mut first = d.matrix().clone();
    for i in 0..n {
        for v in first.row_mut(i) {
            *v /= scale;
        }
    }
    match op {
        LocalOp::First(FirstOrderOp { a }) => {
            for i in 0..n {
                first.row_mut(i)[i] -= a;
            }
            first
        }
        LocalOp::Second(SecondOrderOp { b, c }) => {
            let mut out = first.matmul(&first);
            for i in 0..n {
                let row = out.row_mut(i);
                for (v, f) in row.iter_mut().zip(first.row(i)) {
                    *v += b * f;
                }
                row[i] += c;
            }
            out
        }
    }
}
