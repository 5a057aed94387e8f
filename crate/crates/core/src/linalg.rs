//! Small dense complex matrix helpers.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::Complex;

pub type CMatrix = DMatrix<Complex>;

/// Upper-triangular `P` with real nonnegative diagonal and `A = P*·P`.
///
/// Pivots below `1e−10·trace` are treated as zero and produce a zero row, so
/// rank-deficient positive semidefinite input is accepted. A pivot below
/// `−1e−10·trace` is an error.
pub fn cholesky_upper(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "cholesky_upper needs a square matrix");
    let trace: f64 = (0..n).map(|i| a[(i, i)].re).sum::<f64>().abs();
    let tol = 1e-10 * trace;
    let mut p = CMatrix::zeros(n, n);
    for i in 0..n {
        let pivot = a[(i, i)].re - (0..i).map(|k| p[(k, i)].norm_sqr()).sum::<f64>();
        if pivot < -tol {
            return Err(Error::NotPsd { index: i, pivot });
        }
        if pivot <= tol {
            continue;
        }
        let diag = pivot.sqrt();
        p[(i, i)] = Complex::new(diag, 0.0);
        for j in i + 1..n {
            let s: Complex = (0..i).map(|k| p[(k, i)].conj() * p[(k, j)]).sum();
            p[(i, j)] = (a[(i, j)] - s) / diag;
        }
    }
    Ok(p)
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = hermitian_part(a);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).last().copied().unwrap_or(0.0)
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    max_eigenvalue(&(a.adjoint() * a)).max(0.0).sqrt()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn hermitian_defect(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn inverse(a: &CMatrix) -> Option<CMatrix> {
    a.clone().try_inverse()
}

/// Leading `m×m` principal block.
pub fn leading_block(a: &CMatrix, m: usize) -> CMatrix {
    a.view((0, 0), (m, m)).into_owned()
}

/// Entrywise complex conjugate.
pub fn conj(a: &CMatrix) -> CMatrix {
    a.map(|c| c.conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn cholesky_identity_and_diagonal() {
        let id = CMatrix::identity(3, 3);
        assert_eq!(cholesky_upper(&id).unwrap(), id);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(4.0, 0.0), c(9.0, 0.0)]));
        let p = cholesky_upper(&d).unwrap();
        assert_eq!(p[(0, 0)], c(2.0, 0.0));
        assert_eq!(p[(1, 1)], c(3.0, 0.0));
        assert_eq!(p[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn cholesky_reproduces_reference_factor() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(17.1334199164530, 0.0),
                c(-5.46269136247035, -5.46269136247035),
                c(-5.46269136247035, 5.46269136247035),
                c(4.71734553342817, 0.0),
            ],
        );
        let p = cholesky_upper(&a).unwrap();
        assert!((p[(0, 0)] - c(4.13925355, 0.0)).norm() < 1e-6);
        assert!((p[(0, 1)] - c(-1.31972862, -1.31972862)).norm() < 1e-6);
        assert_eq!(p[(1, 0)], c(0.0, 0.0));
        assert!((p[(1, 1)] - c(1.11084575, 0.0)).norm() < 1e-6);
        assert!(max_abs(&(p.adjoint() * &p - &a)) < 1e-12);
    }

    #[test]
    fn cholesky_rank_deficient_gives_zero_row() {
        // rank one: v v* with v = (1, i)
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let p = cholesky_upper(&a).unwrap();
        assert_eq!(p[(1, 1)], c(0.0, 0.0));
        assert!(max_abs(&(p.adjoint() * &p - &a)) < 1e-14);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(cholesky_upper(&a), Err(Error::NotPsd { index: 1, .. })));
    }

    #[test]
    fn eigenvalues_ascending() {
        let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-13);
        assert!((ev[1] - 3.0).abs() < 1e-13);
    }
}
