//! Finite sections of `M_z` on `D(μ)` in the orthonormalized monomial basis.
//!
//! With `G` the `(N+1)`-size monomial Gram matrix and `G = C*C`, the matrix
//! of `M_z` on the span of `1, …, z^N` is `C S C⁻¹`; its leading `N×N` block
//! is the compression `T`. `T*T` restricted to the first `N` basis vectors is
//! formed exactly as `C⁻* G₁ C⁻¹` with `G₁[m][l] = G[m+1][l+1]`, so only
//! products of several `T` factors see truncation effects. Those are read on
//! the leading `N − margin` block.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measure::MeasureSpec;

use super::gram::gram_monomials;

pub const MIN_TRUNCATION: usize = 8;
pub const FRAME_MIN_EIG: f64 = 1e-10;
pub const CONTRACTION_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct TruncationWorkspace {
    pub n: usize,
    /// `(N+1)×(N+1)` monomial Gram matrix.
    pub gram: CMatrix,
    /// Upper triangular `N×N`, leading block of the Cholesky factor of `gram`.
    pub onb_factor: CMatrix,
    pub t: CMatrix,
    /// `T*T`, exact on the first `N` basis vectors.
    pub frame: CMatrix,
    pub margin: usize,
}

impl TruncationWorkspace {
    pub fn build(mu: &MeasureSpec, n: usize) -> Result<Self> {
        if n < MIN_TRUNCATION {
            return Err(Error::InvalidArgument(format!(
                "truncation size must be at least {MIN_TRUNCATION}, got {n}"
            )));
        }
        let gram = gram_monomials(mu, n + 1);
        let c_ext = linalg::cholesky_upper(&gram)?;
        if let Some(i) = (0..=n).find(|&i| c_ext[(i, i)].re <= 0.0) {
            return Err(Error::NotPsd { index: i, pivot: 0.0 });
        }
        let c_ext_inv = c_ext
            .solve_upper_triangular(&CMatrix::identity(n + 1, n + 1))
            .ok_or(Error::NotPsd { index: 0, pivot: 0.0 })?;
        let shift = CMatrix::from_fn(n + 1, n + 1, |i, j| {
            if i == j + 1 {
                crate::Complex::new(1.0, 0.0)
            } else {
                crate::Complex::new(0.0, 0.0)
            }
        });
        let t_ext = &c_ext * shift * &c_ext_inv;
        let t = linalg::leading_block(&t_ext, n);

        let c = linalg::leading_block(&c_ext, n);
        let c_inv = linalg::leading_block(&c_ext_inv, n);
        let g_shift = gram.view((1, 1), (n, n)).into_owned();
        let frame = linalg::hermitian_part(&(c_inv.adjoint() * g_shift * &c_inv));

        Ok(TruncationWorkspace {
            n,
            gram,
            onb_factor: c,
            t,
            frame,
            margin: (n / 8).max(4),
        })
    }

    pub fn interior(&self) -> usize {
        self.n - self.margin
    }

    /// Largest entry of `I − 2T*T + T*²T²` on the interior block.
    pub fn two_isometry_defect(&self) -> f64 {
        let t2 = &self.t * &self.t;
        let d = CMatrix::identity(self.n, self.n) - self.frame.scale(2.0) + t2.adjoint() * &t2;
        linalg::max_abs(&linalg::leading_block(&d, self.interior()))
    }

    /// `T′ = T (T*T)⁻¹`, with the interior contraction gate.
    pub fn cauchy_dual(&self) -> Result<CMatrix> {
        let tp = cauchy_dual_of(&self.t, &self.frame)?;
        let norm = linalg::operator_norm(&linalg::leading_block(&tp, self.interior()));
        if norm > 1.0 + CONTRACTION_TOL {
            return Err(Error::InvariantViolated {
                what: "Cauchy dual interior norm",
                value: norm,
                limit: 1.0 + CONTRACTION_TOL,
            });
        }
        Ok(tp)
    }

    /// Largest eigenvalue of the interior block of `B_n(T)`.
    pub fn hyperexpansivity_max_eig(&self, n: usize) -> Result<f64> {
        if !(2..=6).contains(&n) {
            return Err(Error::InvalidArgument(format!("hyperexpansivity order must be in 2..=6, got {n}")));
        }
        Ok(linalg::max_eigenvalue(&linalg::leading_block(
            &agler_sum(&self.t, n),
            self.interior(),
        )))
    }
}

/// `T (T*T)⁻¹` for a given `T*T`.
pub fn cauchy_dual_of(t: &CMatrix, frame: &CMatrix) -> Result<CMatrix> {
    let min_eig = linalg::min_eigenvalue(frame);
    if min_eig <= FRAME_MIN_EIG {
        return Err(Error::SingularFrame { min_eig });
    }
    let inv = linalg::inverse(frame).ok_or(Error::SingularFrame { min_eig })?;
    Ok(t * inv)
}

/// `B_n(T) = Σ_k (−1)^k C(n,k) T*^k T^k`.
pub fn agler_sum(t: &CMatrix, n: usize) -> CMatrix {
    let size = t.nrows();
    let mut acc = CMatrix::zeros(size, size);
    let mut power = CMatrix::identity(size, size);
    let mut binom = 1.0;
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += (power.adjoint() * &power).scale(sign * binom);
        power = t * power;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    acc
}

/// Smallest eigenvalue of the leading `size − margin` block of `B_n(T′)`.
pub fn agler_min_eig(tp: &CMatrix, n: usize, margin: usize) -> Result<f64> {
    if !(1..=10).contains(&n) {
        return Err(Error::InvalidArgument(format!("Agler order must be in 1..=10, got {n}")));
    }
    if margin >= tp.nrows() {
        return Err(Error::InvalidArgument(format!(
            "margin {margin} leaves no interior in a {0}×{0} matrix",
            tp.nrows()
        )));
    }
    let b = agler_sum(tp, n);
    Ok(linalg::min_eigenvalue(&linalg::leading_block(&b, tp.nrows() - margin)))
}
