//! Banded LU with partial pivoting, and a small dense solver.
//!
//! The spectral-integration systems are tridiagonal (first-order factors) or
//! pentadiagonal (second-order factors). Their condition numbers grow like the
//! square of the operator coefficients, so the factorization pivots; the
//! resulting fill is confined to `kl` extra superdiagonals.

use crate::error::{Error, Result};

/// Square band matrix stored diagonal by diagonal.
///
/// Diagonal `d` (offset `d - kl` from the main diagonal, so `d = kl` is the
/// main diagonal) occupies `bands[d * n .. (d + 1) * n]`, indexed by column.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    bands: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        assert!(n > 0, "empty band matrix");
        // bandwidths beyond n - 1 carry no entries
        let kl = kl.min(n - 1);
        let ku = ku.min(n - 1);
        Self {
            n,
            kl,
            ku,
            bands: vec![0.0; (kl + ku + 1) * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || j + self.kl < i || i + self.ku < j {
            return None;
        }
        let d = self.kl + j - i;
        Some(d * self.n + j)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.bands[s])
    }

    /// Sets entry `(i, j)`. Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let s = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) lies outside the band"));
        self.bands[s] = value;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                d.set(i, j, self.get(i, j));
            }
        }
        d
    }

    pub fn factor(&self) -> Result<BandedLu> {
        banded_factor(self)
    }
}

/// LU factors of a [`BandedMatrix`] with row interchanges.
///
/// Row `i` of `upper` holds `U[i][i..i + width]`; `lower` holds the
/// `kl` multipliers generated at each elimination step.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    width: usize,
    upper: Vec<f64>,
    lower: Vec<f64>,
    pivots: Vec<usize>,
}

/// Factors `a` with partial pivoting.
pub fn banded_factor(a: &BandedMatrix) -> Result<BandedLu> {
    let n = a.n;
    let kl = a.kl;
    let width = a.kl + a.ku + 1;

    // row i starts at column i - kl; rows near the top are shifted left
    // so that every row starts at its first structurally nonzero entry
    let mut u = vec![0.0; n * width];
    for i in 0..n {
        let first = i.saturating_sub(kl);
        let last = (i + a.ku).min(n - 1);
        for (slot, j) in (first..=last).enumerate() {
            u[i * width + slot] = a.get(i, j);
        }
    }

    let mut lower = vec![0.0; n * kl.max(1)];
    let mut pivots = vec![0; n];
    for k in 0..n {
        let end = (k + kl + 1).min(n);
        let mut p = k;
        let mut best = u[k * width].abs();
        for i in k + 1..end {
            let v = u[i * width].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        pivots[k] = p;
        if best == 0.0 {
            return Err(Error::Singular(k));
        }
        if p != k {
            for s in 0..width {
                u.swap(k * width + s, p * width + s);
            }
        }
        let pivot = u[k * width];
        for i in k + 1..end {
            let factor = u[i * width] / pivot;
            lower[k * kl + (i - k - 1)] = factor;
            for s in 1..width {
                u[i * width + s - 1] = u[i * width + s] - factor * u[k * width + s];
            }
            u[i * width + width - 1] = 0.0;
        }
    }

    Ok(BandedLu {
        n,
        kl,
        width,
        upper: u,
        lower,
        pivots,
    })
}

impl BandedLu {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        banded_solve(self, rhs)
    }
}

/// Solves `A x = rhs` against a factorization of `A`.
pub fn banded_solve(f: &BandedLu, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = f.n;
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let (kl, width) = (f.kl, f.width);
    let mut x = rhs.to_vec();
    for k in 0..n {
        let p = f.pivots[k];
        if p != k {
            x.swap(k, p);
        }
        let end = (k + kl + 1).min(n);
        for i in k + 1..end {
            x[i] -= f.lower[k * kl + (i - k - 1)] * x[k];
        }
    }
    for i in (0..n).rev() {
        let row = &f.upper[i * width..(i + 1) * width];
        let mut acc = x[i];
        for s in 1..width.min(n - i) {
            acc -= row[s] * x[i + s];
        }
        x[i] = acc / row[0];
    }
    Ok(x)
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        dense_solve(self, rhs)
    }

    /// LU factorization with partial pivoting, consuming the matrix.
    pub fn factor(self) -> Result<DenseLu> {
        DenseLu::new(self)
    }
}

/// `P A = L U` of a square matrix, stored in place.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    pivots: Vec<usize>,
}

impl DenseLu {
    pub fn new(a: DenseMatrix) -> Result<Self> {
        let n = a.rows;
        if a.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.cols,
            });
        }
        let mut lu = a.entries;
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Singular(k));
            }
            if p != k {
                let (top, bottom) = lu.split_at_mut(p * n);
                top[k * n..(k + 1) * n].swap_with_slice(&mut bottom[..n]);
            }
            pivots.push(p);
            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let pivot = pivot_row[k];
            for row in tail.chunks_exact_mut(n) {
                if row[k] == 0.0 {
                    continue;
                }
                let factor = row[k] / pivot;
                row[k] = factor;
                for (x, &y) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *x -= factor * y;
                }
            }
        }
        Ok(Self { n, lu, pivots })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            x.swap(k, p);
        }
        for k in 0..n {
            let xk = x[k];
            if xk != 0.0 {
                for i in k + 1..n {
                    x[i] -= self.lu[i * n + k] * xk;
                }
            }
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let acc: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - acc) / row[i];
        }
        Ok(x)
    }
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: rhs.len(),
        });
    }
    a.clone().factor()?.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_solve_with_many_interchanges() {
        let n = 9;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, ((i * 7 + j * 3) % 11) as f64 - 5.0 + if i + j == n - 1 { 9.0 } else { 0.0 });
            }
        }
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let b = a.mul_vec(&x);
        let got = dense_solve(&a, &b).unwrap();
        for (g, w) in got.iter().zip(&x) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    fn tridiagonal_identity(n: usize) -> BandedMatrix {
        let mut a = BandedMatrix::zeros(n, 1, 1);
        for i in 0..n {
            a.set(i, i, 1.0);
        }
        a
    }

    #[test]
    fn outside_band_reads_zero() {
        let mut a = BandedMatrix::zeros(6, 1, 2);
        a.set(2, 4, 3.0);
        assert_eq!(a.get(2, 4), 3.0);
        assert_eq!(a.get(4, 2), 0.0);
        assert_eq!(a.get(0, 5), 0.0);
        assert_eq!(a.get(9, 9), 0.0);
    }

    #[test]
    #[should_panic]
    fn writing_outside_band_panics() {
        BandedMatrix::zeros(5, 1, 1).set(0, 3, 1.0);
    }

    #[test]
    fn identity_returns_rhs() {
        let f = tridiagonal_identity(5).factor().unwrap();
        let b = [1.0, -2.0, 3.5, 0.0, 7.0];
        assert_eq!(f.solve(&b).unwrap(), b.to_vec());
    }

    #[test]
    fn swap_needs_pivoting() {
        let mut a = BandedMatrix::zeros(2, 1, 1);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        let x = a.factor().unwrap().solve(&[1.0, 2.0]).unwrap();
        assert_eq!(x, vec![2.0, 1.0]);
    }

    #[test]
    fn zero_rhs_and_scaled_identity() {
        let mut a = BandedMatrix::zeros(4, 1, 1);
        for i in 0..4 {
            a.set(i, i, 2.0);
        }
        let f = a.factor().unwrap();
        assert_eq!(f.solve(&[0.0; 4]).unwrap(), vec![0.0; 4]);
        assert_eq!(
            f.solve(&[0.0, 0.0, 1.0, 0.0]).unwrap(),
            vec![0.0, 0.0, 0.5, 0.0]
        );
    }

    #[test]
    fn singular_column_reported() {
        let mut a = BandedMatrix::zeros(3, 1, 1);
        a.set(0, 0, 1.0);
        a.set(2, 2, 1.0);
        assert_eq!(a.factor().unwrap_err(), Error::Singular(1));
    }

    #[test]
    fn dimension_mismatch() {
        let f = tridiagonal_identity(3).factor().unwrap();
        assert!(matches!(
            f.solve(&[1.0]),
            Err(Error::DimensionMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn dense_examples() {
        let id = DenseMatrix::identity(3);
        assert_eq!(id.solve(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        let a = DenseMatrix::from_rows(2, 2, vec![1.0, 1.0, 1.0, -1.0]).unwrap();
        assert_eq!(a.solve(&[3.0, 1.0]).unwrap(), vec![2.0, 1.0]);
        let s = DenseMatrix::from_rows(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(s.solve(&[1.0, 1.0]), Err(Error::Singular(1))));
    }
}
