//! Chebyshev grids, coefficient/value transforms and series arithmetic.
//!
//! A function on `[-1, 1]` is represented either by its values at the
//! `M + 1` points `y_j = cos(jπ/M)` ([`GridValues`]) or by a truncated
//! Chebyshev series ([`ChebCoeffs`])
//!
//! ```text
//! u(y) = a[0]/2 + a[1] T_1(y) + ... + a[M-1] T_{M-1}(y) + 0 * T_M(y)
//! ```
//!
//! The halving of the leading coefficient lives in the series, not in
//! storage, and the top coefficient `a[M]` is always zero.

use std::f64::consts::PI;

use rustdct::DctPlanner;

use crate::error::{Error, Result};

/// Below this order the transforms use the direct cosine sum.
const DIRECT_TRANSFORM_MAX: usize = 64;

/// One end of `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Left,
    Right,
}

impl Endpoint {
    pub fn y(self) -> f64 {
        match self {
            Endpoint::Left => -1.0,
            Endpoint::Right => 1.0,
        }
    }

    /// Index of this end on a grid of order `m` (points run from `+1` down).
    pub fn grid_index(self, m: usize) -> usize {
        match self {
            Endpoint::Left => m,
            Endpoint::Right => 0,
        }
    }
}

/// Chebyshev extreme points `cos(jπ/M)`, `j = 0..=M`, descending from `+1` to `-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebGrid {
    m: usize,
    points: Vec<f64>,
}

impl ChebGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::GridTooSmall { min: 1, got: 0 });
        }
        Ok(Self {
            m,
            points: points_unchecked(m),
        })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Samples `f` at the grid points.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridValues {
        GridValues {
            m: self.m,
            v: self.points.iter().map(|&y| f(y)).collect(),
        }
    }
}

/// Grid of order `m`; see [`ChebGrid`].
pub fn cheb_points(m: usize) -> Result<ChebGrid> {
    ChebGrid::new(m)
}

// sin((M - 2j)π / 2M) equals cos(jπ/M) but is exactly antisymmetric about
// the midpoint and hits ±1 and 0 exactly.
pub(crate) fn points_unchecked(m: usize) -> Vec<f64> {
    let mf = m as f64;
    (0..=m)
        .map(|j| ((mf - 2.0 * j as f64) * PI / (2.0 * mf)).sin())
        .collect()
}

/// Truncated Chebyshev series on a grid of order `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebCoeffs {
    m: usize,
    a: Vec<f64>,
}

impl ChebCoeffs {
    /// Wraps `a` (length `M + 1`, `M >= 1`) and zeroes the top coefficient.
    pub fn new(mut a: Vec<f64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::GridTooSmall {
                min: 1,
                got: a.len().saturating_sub(1),
            });
        }
        let m = a.len() - 1;
        a[m] = 0.0;
        Ok(Self { m, a })
    }

    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            a: vec![0.0; m + 1],
        }
    }

    /// The constant function `k`.
    pub fn constant(m: usize, k: f64) -> Self {
        let mut c = Self::zeros(m);
        c.a[0] = 2.0 * k;
        c
    }

    /// The polynomial `T_n`; `n` must be below `M`.
    pub fn basis(m: usize, n: usize) -> Self {
        assert!(n < m, "T_{n} is not representable on a grid of order {m}");
        let mut c = Self::zeros(m);
        c.a[n] = if n == 0 { 2.0 } else { 1.0 };
        c
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.a
    }

    /// Coefficient `n` as stored (so `T_0`'s contribution is `a[0]/2`).
    pub fn get(&self, n: usize) -> f64 {
        self.a[n]
    }

    pub fn to_values(&self) -> GridValues {
        to_values(self)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &ChebCoeffs) -> ChebCoeffs {
        debug_assert_eq!(self.m, other.m);
        ChebCoeffs {
            m: self.m,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + s * y).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> ChebCoeffs {
        ChebCoeffs {
            m: self.m,
            a: self.a.iter().map(|x| s * x).collect(),
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Evaluates the series at `y` in `[-1, 1]`.
    pub fn eval(&self, y: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&y) {
            return Err(Error::OutOfDomain(y));
        }
        Ok(self.eval_unchecked(y))
    }

    /// Backward recurrence. Near the endpoints the Reinsch variant carries
    /// `y ∓ 1` instead of `2y`, which keeps full accuracy inside boundary layers.
    pub(crate) fn eval_unchecked(&self, y: f64) -> f64 {
        let a = &self.a;
        let top = self.m - 1;
        if y >= 0.5 {
            let t = 2.0 * (y - 1.0);
            let (mut b, mut d) = (0.0, 0.0);
            for k in (1..=top).rev() {
                d += t * b + a[k];
                b += d;
            }
            0.5 * t * b + d + 0.5 * a[0]
        } else if y <= -0.5 {
            let t = 2.0 * (y + 1.0);
            let (mut b, mut d) = (0.0, 0.0);
            for k in (1..=top).rev() {
                d = t * b - d + a[k];
                b = d - b;
            }
            0.5 * t * b - d + 0.5 * a[0]
        } else {
            let two_y = 2.0 * y;
            let (mut b1, mut b2) = (0.0, 0.0);
            for k in (1..=top).rev() {
                let b0 = two_y * b1 - b2 + a[k];
                b2 = b1;
                b1 = b0;
            }
            y * b1 - b2 + 0.5 * a[0]
        }
    }

    /// `(u(+1), u(-1))`.
    pub fn endpoints(&self) -> (f64, f64) {
        let mut plus = 0.0;
        let mut minus = 0.0;
        for k in (1..self.m).rev() {
            plus += self.a[k];
            if k % 2 == 0 {
                minus += self.a[k];
            } else {
                minus -= self.a[k];
            }
        }
        let half = 0.5 * self.a[0];
        (plus + half, minus + half)
    }

    /// First derivative at `+1` and `-1`, from `T_n'(±1) = (±1)^(n+1) n²`.
    pub fn endpoint_derivatives(&self) -> (f64, f64) {
        let mut plus = 0.0;
        let mut minus = 0.0;
        for k in (1..self.m).rev() {
            let w = (k * k) as f64 * self.a[k];
            plus += w;
            if k % 2 == 0 {
                minus -= w;
            } else {
                minus += w;
            }
        }
        (plus, minus)
    }

    /// Coefficients of `du/dy`.
    pub fn derivative(&self) -> ChebCoeffs {
        let m = self.m;
        let mut d = vec![0.0; m + 1];
        // d[M] = d[M-1] = 0 since a[M] = 0
        for k in (1..m).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * self.a[k];
        }
        ChebCoeffs { m, a: d }
    }

    /// Antiderivative with zero `T_0` coefficient.
    ///
    /// `∫T_0 = T_1`, `∫T_1 = T_2/4` and `∫T_n = T_{n+1}/(2(n+1)) - T_{n-1}/(2(n-1))`,
    /// which collapse to `b[k] = (a[k-1] - a[k+1]) / 2k` in stored form. The
    /// image of `a[M-1]` at index `M` is dropped.
    pub fn integrate(&self) -> ChebCoeffs {
        let m = self.m;
        let a = &self.a;
        let mut b = vec![0.0; m + 1];
        for k in 1..m {
            let upper = if k + 1 < m { a[k + 1] } else { 0.0 };
            b[k] = (a[k - 1] - upper) / (2.0 * k as f64);
        }
        ChebCoeffs { m, a: b }
    }

    /// Second antiderivative with zero `T_0` and `T_1` coefficients.
    pub fn double_integrate(&self) -> ChebCoeffs {
        let m = self.m;
        let a = &self.a;
        let at = |j: usize| if j < m { a[j] } else { 0.0 };
        let mut b = vec![0.0; m + 1];
        for n in 2..m {
            let nf = n as f64;
            b[n] = at(n - 2) / (4.0 * nf * (nf - 1.0)) - at(n) / (2.0 * (nf * nf - 1.0))
                + at(n + 2) / (4.0 * nf * (nf + 1.0));
        }
        ChebCoeffs { m, a: b }
    }
}

/// Values at the points of a [`ChebGrid`] of order `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridValues {
    m: usize,
    v: Vec<f64>,
}

impl GridValues {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::GridTooSmall {
                min: 1,
                got: v.len().saturating_sub(1),
            });
        }
        Ok(Self { m: v.len() - 1, v })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.v
    }

    pub fn to_coeffs(&self) -> ChebCoeffs {
        to_coeffs(self)
    }

    /// Evaluates the degree-`M` interpolant through the stored values
    /// (barycentric formula of the second kind).
    pub fn interpolate(&self, y: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&y) {
            return Err(Error::OutOfDomain(y));
        }
        Ok(barycentric(&points_unchecked(self.m), &self.v, y))
    }
}

/// Barycentric interpolation on Chebyshev extreme points.
pub(crate) fn barycentric(points: &[f64], values: &[f64], y: f64) -> f64 {
    let m = points.len() - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, (&p, &v)) in points.iter().zip(values).enumerate() {
        let diff = y - p;
        if diff == 0.0 {
            return v;
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == m {
            w *= 0.5;
        }
        let w = w / diff;
        num += w * v;
        den += w;
    }
    num / den
}

/// Interpolating coefficients of `vals`, with the top coefficient zeroed.
pub fn to_coeffs(vals: &GridValues) -> ChebCoeffs {
    let m = vals.m;
    let mut a = dct1(&vals.v);
    let scale = 2.0 / m as f64;
    for x in a.iter_mut() {
        *x *= scale;
    }
    a[m] = 0.0;
    ChebCoeffs { m, a }
}

/// Values of the series at the grid points.
pub fn to_values(coeffs: &ChebCoeffs) -> GridValues {
    GridValues {
        m: coeffs.m,
        v: dct1(&coeffs.a),
    }
}

/// `u(y)`; `y` outside `[-1, 1]` is rejected.
pub fn eval_series(coeffs: &ChebCoeffs, y: f64) -> Result<f64> {
    coeffs.eval(y)
}

/// `(u(+1), u(-1))`.
pub fn eval_endpoints(coeffs: &ChebCoeffs) -> (f64, f64) {
    coeffs.endpoints()
}

pub fn integrate_coeffs(coeffs: &ChebCoeffs) -> ChebCoeffs {
    coeffs.integrate()
}

pub fn double_integrate_coeffs(coeffs: &ChebCoeffs) -> ChebCoeffs {
    coeffs.double_integrate()
}

/// Unnormalised type-I cosine transform
/// `X_j = x_0/2 + (-1)^j x_M/2 + Σ_{k=1}^{M-1} x_k cos(jkπ/M)`.
pub fn dct1(x: &[f64]) -> Vec<f64> {
    if x.len() - 1 <= DIRECT_TRANSFORM_MAX {
        dct1_direct(x)
    } else {
        dct1_fast(x)
    }
}

/// O(M²) reference path of [`dct1`].
pub fn dct1_direct(x: &[f64]) -> Vec<f64> {
    let m = x.len() - 1;
    // cos(iπ/M) for i in 0..2M, indexed by jk mod 2M
    let table: Vec<f64> = (0..2 * m)
        .map(|i| (i as f64 * PI / m as f64).cos())
        .collect();
    (0..=m)
        .map(|j| {
            let mut acc = 0.5 * (x[0] + if j % 2 == 0 { x[m] } else { -x[m] });
            for (k, &xk) in x.iter().enumerate().take(m).skip(1) {
                acc += xk * table[(j * k) % (2 * m)];
            }
            acc
        })
        .collect()
}

/// O(M log M) path of [`dct1`].
pub fn dct1_fast(x: &[f64]) -> Vec<f64> {
    let mut buf = x.to_vec();
    let mut planner = DctPlanner::new();
    let dct = planner.plan_dct1(buf.len());
    dct.process_dct1(&mut buf);
    buf
}
