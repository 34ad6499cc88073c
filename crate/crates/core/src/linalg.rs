//! Small dense helpers: minors, Gram–Schmidt, Gaussian sampling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Determinant of the `n × n` row-major matrix in `buf`, destroying it.
/// Gaussian elimination with partial pivoting.
pub(crate) fn det_in_place(buf: &mut [Complex64], n: usize) -> Complex64 {
    debug_assert_eq!(buf.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                buf[a * n + col]
                    .norm_sqr()
                    .total_cmp(&buf[b * n + col].norm_sqr())
            })
            .unwrap();
        let p = buf[pivot * n + col];
        if p.norm_sqr() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                buf.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let factor = buf[row * n + col] / p;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for k in col + 1..n {
                let v = buf[col * n + k];
                buf[row * n + k] -= factor * v;
            }
        }
    }
    det
}

/// Determinant of the submatrix of `m` with the given rows and columns.
pub(crate) fn minor(
    m: &DMatrix<Complex64>,
    rows: &[usize],
    cols: &[usize],
    buf: &mut Vec<Complex64>,
) -> Complex64 {
    let n = rows.len();
    buf.clear();
    for &r in rows {
        for &c in cols {
            buf.push(m[(r, c)]);
        }
    }
    det_in_place(buf, n)
}

/// Modified Gram–Schmidt with one reorthogonalisation pass.
///
/// Fails when a column's residual after projection drops below `1e-10`
/// of its original norm.
pub(crate) fn orthonormalize_columns(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let mut q = m.clone();
    for j in 0..q.ncols() {
        let original = q.column(j).norm();
        if original == 0.0 {
            return Err(Error::DegenerateOrbitals(0.0));
        }
        for _pass in 0..2 {
            for k in 0..j {
                let proj = q.column(k).dotc(&q.column(j));
                let qk = q.column(k).clone_owned();
                q.column_mut(j).axpy(-proj, &qk, Complex64::new(1.0, 0.0));
            }
        }
        let residual = q.column(j).norm();
        if residual <= 1e-10 * original {
            return Err(Error::DegenerateOrbitals(residual / original));
        }
        q.column_mut(j).unscale_mut(residual);
    }
    Ok(q)
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub(crate) fn gaussian_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DMatrix<Complex64> {
    let data: Vec<Complex64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    DMatrix::from_vec(rows, cols, data)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
