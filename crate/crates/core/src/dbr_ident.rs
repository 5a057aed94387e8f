//! `D(μ)` as a de Branges–Rovnyak space `H(B)` with `B = (p_1/q, …, p_k/q)`.
//!
//! The kernel identity `K(z,w) = (1 − Σ_j b_j(z) conj(b_j(w))) / (1 − z w̄)`
//! is equivalent to
//!
//! ```text
//! q(z) conj(q(w)) (1 − (1 − z w̄) K(z,w)) = Σ_{i,l} C_il z^i w̄^l,
//! ```
//!
//! a polynomial of bidegree `(k, k)` whose row and column 0 vanish. `A` is
//! the trailing `k×k` block of `C` and `P` its upper Cholesky factor.
//!
//! Two readings of `P` are kept. `row_polys[j] = Σ_i P[j][i] z^{i+1}` is the
//! literal row rule; `p_polys[j] = Σ_i conj(P[j][i]) z^{i+1}` satisfies the
//! kernel identity above and is what `B` is built from.

use std::f64::consts::PI;

use crate::cpoly::ComplexPoly;
use crate::dirichlet::CostaraModel;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::Complex;

pub const INTERP_RESIDUAL_TOL: f64 = 1e-8;
pub const DELETED_ROW_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-8;
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
pub const SCHUR_TOL: f64 = 1e-8;
pub const SCHUR_GRID: usize = 40;
pub const SCHUR_RADIUS: f64 = 0.995;

const NODE_RADII: [f64; 3] = [0.3, 0.55, 0.8];

#[derive(Clone, Debug)]
pub struct SchurIdentification {
    /// Full `(k+1)×(k+1)` coefficient matrix, before deleting row/column 0.
    pub coeffs: CMatrix,
    pub a: CMatrix,
    /// Upper triangular, `A = P*·P`.
    pub p_factor: CMatrix,
    pub p_polys: Vec<ComplexPoly>,
    pub row_polys: Vec<ComplexPoly>,
    pub q: ComplexPoly,
    /// Largest entry of the deleted row and column.
    pub deleted_max: f64,
    pub interp_residual: f64,
    /// `sup Σ_j |b_j|²` over the check grid.
    pub schur_sup: f64,
}

fn interpolation_nodes(k: usize, offset: f64) -> Vec<Complex> {
    (0..=k)
        .map(|i| {
            let angle = 2.0 * PI * i as f64 / (k + 1) as f64 + offset;
            Complex::from_polar(NODE_RADII[i % 3], angle)
        })
        .collect()
}

fn vandermonde(nodes: &[Complex]) -> CMatrix {
    let n = nodes.len();
    CMatrix::from_fn(n, n, |i, j| nodes[i].powu(j as u32))
}

/// `q(z) conj(q(w)) (1 − (1 − z w̄) K(z, w))`.
pub fn bivariate_defect(model: &CostaraModel, z: Complex, w: Complex) -> Complex {
    let q = &model.fact.q;
    q.eval(z) * q.eval(w).conj() * (1.0 - (1.0 - z * w.conj()) * model.kernel_full(z, w))
}

fn eval_bivariate(c: &CMatrix, z: Complex, w: Complex) -> Complex {
    let n = c.nrows();
    let zp: Vec<Complex> = (0..n).map(|i| z.powu(i as u32)).collect();
    let wp: Vec<Complex> = (0..n).map(|i| w.conj().powu(i as u32)).collect();
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..n {
        for l in 0..n {
            acc += c[(i, l)] * zp[i] * wp[l];
        }
    }
    acc
}

/// Coefficients `C_il` of the bivariate polynomial, by interpolation on a
/// `(k+1)×(k+1)` node grid. Returns `(C, residual)` where the residual is the
/// largest mismatch on a second, rotated node grid.
pub fn interpolate_coefficients(model: &CostaraModel) -> Result<(CMatrix, f64)> {
    let k = model.num_atoms();
    let nodes = interpolation_nodes(k, 0.0);
    let v = vandermonde(&nodes);
    let v_inv = linalg::inverse(&v).ok_or(Error::ResidualTooLarge {
        residual: f64::INFINITY,
        limit: INTERP_RESIDUAL_TOL,
    })?;
    let e = CMatrix::from_fn(k + 1, k + 1, |a, b| bivariate_defect(model, nodes[a], nodes[b]));
    let c = &v_inv * e * v_inv.adjoint();

    let check = interpolation_nodes(k, 0.37);
    let scale = linalg::max_abs(&c).max(1.0);
    let mut residual: f64 = 0.0;
    for &z in &check {
        for &w in &check {
            let d = (eval_bivariate(&c, z, w) - bivariate_defect(model, z, w)).norm();
            residual = residual.max(d / scale);
        }
    }
    Ok((c, residual))
}

/// The Hermitian `k×k` matrix `A`.
pub fn compute_a(model: &CostaraModel) -> Result<CMatrix> {
    Ok(identify_parts(model)?.0)
}

fn identify_parts(model: &CostaraModel) -> Result<(CMatrix, CMatrix, f64, f64)> {
    let k = model.num_atoms();
    let (c, residual) = interpolate_coefficients(model)?;
    if residual > INTERP_RESIDUAL_TOL {
        return Err(Error::ResidualTooLarge {
            residual,
            limit: INTERP_RESIDUAL_TOL,
        });
    }
    let scale = linalg::max_abs(&c).max(1.0);
    let deleted_max = (0..=k)
        .map(|i| c[(0, i)].norm().max(c[(i, 0)].norm()))
        .fold(0.0, f64::max);
    if deleted_max > DELETED_ROW_TOL * scale {
        return Err(Error::InvariantViolated {
            what: "row/column 0 of the coefficient matrix",
            value: deleted_max,
            limit: DELETED_ROW_TOL * scale,
        });
    }
    let block = c.view((1, 1), (k, k)).into_owned();
    let herm = linalg::hermitian_defect(&block);
    if herm > HERMITIAN_TOL * scale {
        return Err(Error::InvariantViolated {
            what: "Hermitian defect of A",
            value: herm,
            limit: HERMITIAN_TOL * scale,
        });
    }
    let a = linalg::hermitian_part(&block);
    let trace: f64 = (0..k).map(|i| a[(i, i)].re).sum();
    let min_eig = linalg::min_eigenvalue(&a);
    if min_eig < -PSD_TOL * trace.abs() {
        return Err(Error::NotPsd {
            index: 0,
            pivot: min_eig,
        });
    }
    Ok((a, c, deleted_max, residual))
}

impl SchurIdentification {
    pub fn build(model: &CostaraModel) -> Result<Self> {
        let k = model.num_atoms();
        let (a, coeffs, deleted_max, interp_residual) = identify_parts(model)?;
        let p_factor = linalg::cholesky_upper(&a)?;
        let recon = linalg::max_abs(&(p_factor.adjoint() * &p_factor - &a));
        let limit = RECONSTRUCTION_TOL * linalg::max_abs(&a).max(f64::MIN_POSITIVE);
        if recon > limit {
            return Err(Error::InvariantViolated {
                what: "Cholesky reconstruction",
                value: recon,
                limit,
            });
        }
        let poly_from_row = |j: usize, conjugate: bool| {
            let mut c = vec![Complex::new(0.0, 0.0); k + 1];
            for i in 0..k {
                let v = p_factor[(j, i)];
                c[i + 1] = if conjugate { v.conj() } else { v };
            }
            ComplexPoly::new(c)
        };
        let mut ident = SchurIdentification {
            coeffs,
            p_polys: (0..k).map(|j| poly_from_row(j, true)).collect(),
            row_polys: (0..k).map(|j| poly_from_row(j, false)).collect(),
            a,
            p_factor,
            q: model.fact.q.clone(),
            deleted_max,
            interp_residual,
            schur_sup: 0.0,
        };
        ident.schur_sup = ident.schur_sup_on_grid(SCHUR_GRID, SCHUR_RADIUS);
        if ident.schur_sup > 1.0 + SCHUR_TOL {
            return Err(Error::InvariantViolated {
                what: "Schur bound sup Σ|b_j|²",
                value: ident.schur_sup,
                limit: 1.0 + SCHUR_TOL,
            });
        }
        Ok(ident)
    }

    pub fn num_atoms(&self) -> usize {
        self.p_polys.len()
    }

    /// `(b_1(z), …, b_k(z))`.
    pub fn schur_row(&self, z: Complex) -> Vec<Complex> {
        let qz = self.q.eval(z);
        self.p_polys.iter().map(|p| p.eval(z) / qz).collect()
    }

    pub fn schur_norm_sqr(&self, z: Complex) -> f64 {
        self.schur_row(z).iter().map(|b| b.norm_sqr()).sum()
    }

    /// Polar grid with radii `R·(i+1)/n` and `n` angles.
    pub fn schur_sup_on_grid(&self, n: usize, radius: f64) -> f64 {
        let mut sup: f64 = 0.0;
        for i in 0..n {
            let r = radius * (i + 1) as f64 / n as f64;
            for j in 0..n {
                let z = Complex::from_polar(r, 2.0 * PI * j as f64 / n as f64);
                sup = sup.max(self.schur_norm_sqr(z));
            }
        }
        sup
    }

    /// `(1 − Σ_j b_j(z) conj(b_j(w))) / (1 − z w̄)`.
    pub fn kernel_hb(&self, z: Complex, w: Complex) -> Complex {
        let bz = self.schur_row(z);
        let bw = self.schur_row(w);
        let s: Complex = bz.iter().zip(&bw).map(|(x, y)| x * y.conj()).sum();
        (1.0 - s) / (1.0 - z * w.conj())
    }
}
