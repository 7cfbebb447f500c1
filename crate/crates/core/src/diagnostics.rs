//! Conditioning and singular spectra of the banded integration systems.

use std::io::{self, Write};

use crate::banded::DenseMatrix;
use crate::diffmat::LocalOp;
use crate::error::{Error, Result};
use crate::integration::{first_order_matrix, second_order_matrix, SecondOrderOp};

/// Largest grid order accepted for dense analysis.
pub const DENSE_LIMIT: usize = 2048;

/// Entries counted by [`SpectrumReport::localization`].
pub const LOCALIZATION_HEAD: usize = 10;

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `σ_max / σ_min`; infinite for a singular matrix.
    pub condition: f64,
    /// Right singular vectors, in the order of `singular_values`.
    pub vectors: Option<Vec<Vec<f64>>>,
    /// Share of each vector's squared mass in its first [`LOCALIZATION_HEAD`] entries.
    pub localization: Option<Vec<f64>>,
}

/// The banded system of a single factor, materialized.
pub fn dense_export(op: LocalOp, m: usize) -> Result<DenseMatrix> {
    if m > DENSE_LIMIT {
        return Err(Error::TooLarge { size: m, limit: DENSE_LIMIT });
    }
    let banded = match op {
        LocalOp::First(op) => first_order_matrix(op, m)?,
        LocalOp::Second(op) => second_order_matrix(op, m)?,
    };
    Ok(banded.to_dense())
}

pub fn localization_score(v: &[f64]) -> f64 {
    let total: f64 = v.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return 0.0;
    }
    let head: f64 = v.iter().take(LOCALIZATION_HEAD).map(|x| x * x).sum();
    head / total
}

/// Full SVD by one-sided Jacobi rotations.
pub fn singular_spectrum(a: &DenseMatrix, vectors: bool) -> Result<SpectrumReport> {
    let n = a.cols();
    if a.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.rows() });
    }
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: DENSE_LIMIT });
    }
    let t = a.transpose();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| t.row(j).to_vec()).collect();
    let mut v: Option<Vec<Vec<f64>>> = vectors.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            })
            .collect()
    });

    let tol = f64::EPSILON * n.max(1) as f64;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (cp, cq) = pair(&mut cols, p, q);
                let alpha = dot(cp, cp);
                let beta = dot(cq, cq);
                let gamma = dot(cp, cq);
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(cp, cq, c, s);
                if let Some(v) = v.as_mut() {
                    let (vp, vq) = pair(v, p, q);
                    rotate(vp, vq, c, s);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let condition = match (singular_values.first(), singular_values.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    };
    let vectors = v.map(|v| order.iter().map(|&i| v[i].clone()).collect::<Vec<_>>());
    let localization = vectors
        .as_ref()
        .map(|vs| vs.iter().map(|x| localization_score(x)).collect());
    Ok(SpectrumReport { singular_values, condition, vectors, localization })
}

fn pair(cols: &mut [Vec<f64>], p: usize, q: usize) -> (&mut Vec<f64>, &mut Vec<f64>) {
    let (lo, hi) = cols.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn rotate(p: &mut [f64], q: &mut [f64], c: f64, s: f64) {
    for (x, y) in p.iter_mut().zip(q.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Condition numbers of `family(a)` at grid order `m`, one per entry of `a_values`.
pub fn condition_vs_parameter(
    family: impl Fn(f64) -> Result<LocalOp>,
    a_values: &[f64],
    m: usize,
) -> Result<Vec<(f64, f64)>> {
    a_values
        .iter()
        .map(|&a| {
            let mat = dense_export(family(a)?, m)?;
            Ok((a, singular_spectrum(&mat, false)?.condition))
        })
        .collect()
}

/// The `D² - a²` family.
pub fn helmholtz_family(a: f64) -> Result<LocalOp> {
    Ok(LocalOp::Second(SecondOrderOp::new(0.0, -a * a)?))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `index,sigma,localization` rows, 1-based; the last column is empty
/// when vectors were not computed.
pub fn write_spectrum_csv(report: &SpectrumReport, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "index,sigma,localization")?;
    for (i, s) in report.singular_values.iter().enumerate() {
        match &report.localization {
            Some(l) => writeln!(out, "{},{:e},{:.6}", i + 1, s, l[i])?,
            None => writeln!(out, "{},{:e},", i + 1, s)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integration::FirstOrderOp;

    #[test]
    fn identity_and_diagonal() {
        let r = singular_spectrum(&DenseMatrix::identity(5), true).unwrap();
        assert!(r.singular_values.iter().all(|&s| s == 1.0));
        assert_eq!(r.condition, 1.0);

        let d = DenseMatrix::from_rows(3, 3, vec![1.0, 0.0, 0.0, 0.0, -3.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let r = singular_spectrum(&d, true).unwrap();
        assert_eq!(r.singular_values, vec![3.0, 2.0, 1.0]);
        assert_eq!(r.condition, 3.0);
        assert_eq!(r.vectors.unwrap()[0], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn first_order_without_coupling_is_identity() {
        let m = 9;
        let a = dense_export(LocalOp::First(FirstOrderOp { a: 0.0 }), m).unwrap();
        assert_eq!(a, DenseMatrix::identity(m - 1));
    }

    #[test]
    fn export_matches_banded_assembly() {
        let op = SecondOrderOp { b: 1e5, c: -1e6 };
        let dense = dense_export(LocalOp::Second(op), 128).unwrap();
        let banded = second_order_matrix(op, 128).unwrap();
        assert_eq!(dense.rows(), 126);
        for i in 0..126 {
            for j in 0..126 {
                assert_eq!(dense.get(i, j).to_bits(), banded.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn rejects_oversized() {
        let op = LocalOp::First(FirstOrderOp { a: 1.0 });
        assert!(matches!(dense_export(op, DENSE_LIMIT + 1), Err(Error::TooLarge { .. })));
        let rect = DenseMatrix::zeros(2, 3);
        assert!(singular_spectrum(&rect, false).is_err());
    }

    #[test]
    fn singular_matrix_has_infinite_condition() {
        let a = DenseMatrix::from_rows(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        let r = singular_spectrum(&a, false).unwrap();
        assert!((r.singular_values[0] - 5.0).abs() < 1e-14);
        assert_eq!(r.condition, f64::INFINITY);
    }

    #[test]
    fn unscaled_helmholtz_is_well_conditioned() {
        let c = condition_vs_parameter(helmholtz_family, &[0.0], 64).unwrap();
        assert!(c[0].1 < 10.0, "{}", c[0].1);
    }

    #[test]
    fn slope_of_exact_power() {
        let pts: Vec<(f64, f64)> = [1.0, 10.0, 100.0].iter().map(|&x: &f64| (x, 3.0 * x.powi(2))).collect();
        assert!((loglog_slope(&pts) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let r = singular_spectrum(&DenseMatrix::identity(2), true).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&r, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,sigma,localization\n1,1e0,1.000000\n2,1e0,1.000000\n");
    }
}
