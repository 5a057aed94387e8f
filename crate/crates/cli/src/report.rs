//! The `analyze` report.

use std::collections::BTreeMap;

use cdsp_core::linalg::CMatrix;
use cdsp_core::{Analysis, ComplexPoly, MeasureSpec};
use num_complex::Complex64 as Complex;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for C {
    fn from(z: Complex) -> Self {
        C { re: z.re, im: z.im }
    }
}

impl From<C> for Complex {
    fn from(c: C) -> Self {
        Complex::new(c.re, c.im)
    }
}

pub fn cvec(v: &[Complex]) -> Vec<C> {
    v.iter().copied().map(C::from).collect()
}

pub fn cmat(m: &CMatrix) -> Vec<Vec<C>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

fn poly(p: &ComplexPoly, len: usize) -> Vec<C> {
    (0..len).map(|j| p.coeff(j).into()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub measure: MeasureEcho,
    pub factorization: FactorizationSection,
    pub costara: CostaraSection,
    pub identification: IdentificationSection,
    pub cdsp: CdspSection,
    pub oracle: Option<OracleSection>,
    pub checks: ChecksSection,
    pub meta: Meta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEcho {
    pub text: String,
    pub canonical: String,
    pub atoms: Vec<AtomEcho>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomEcho {
    pub point: C,
    pub weight: f64,
    pub angle_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationSection {
    /// Ascending coefficients of the monic `q`.
    pub q: Vec<C>,
    pub d: f64,
    pub outer_roots: Vec<C>,
    pub inner_roots: Vec<C>,
    /// `q = z² − a(1+i)z + bi` and `Π(z − β) = z² − c(1+i)z + di`; real parts, two atoms only.
    pub shape: Option<Shape>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostaraSection {
    pub o_mu_at_0: C,
    pub o_prime: Vec<C>,
    pub f_prime_at_support: Vec<C>,
    pub gram_f: Vec<Vec<C>>,
    pub b_inv: Vec<Vec<C>>,
    /// `gram_f[0][0]`; two atoms only.
    pub m: Option<f64>,
    /// `gram_f[0][1] = −u − vi`; two atoms only.
    pub u: Option<f64>,
    pub v: Option<f64>,
    /// `b_inv[0][1]`; two atoms only.
    pub s: Option<C>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentificationSection {
    #[serde(rename = "A")]
    pub a: Vec<Vec<C>>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<C>>,
    /// Kernel-consistent `p_j`, ascending coefficients.
    pub p_polys: Vec<Vec<C>>,
    /// Literal rows of `P` as polynomials.
    pub row_polys: Vec<Vec<C>>,
    pub deleted_max: f64,
    pub interp_residual: f64,
    pub schur_sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdspSection {
    pub verdict: String,
    pub s_offdiag: Option<C>,
    pub s_offdiag_row: Option<C>,
    pub root_products: Vec<C>,
    pub a7_det: Option<C>,
    pub a7_det_kernel: Option<C>,
    /// Present only with `--diagnostics`.
    pub a5_diagnostic: Option<C>,
    pub citations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderValue {
    pub n: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    #[serde(rename = "N")]
    pub n: usize,
    pub margin: usize,
    pub two_isometry_defect: f64,
    pub cauchy_dual_norm: f64,
    /// Smallest eigenvalue of `B_n(T′)`.
    pub agler_min_eig: Vec<OrderValue>,
    /// Largest eigenvalue of `B_n(T)`.
    pub hyperexpansivity_max_eig: Vec<OrderValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChecksSection {
    pub kernel_pairs: usize,
    pub kernel_max_rel_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool_version: String,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    /// Present only with `--timing`.
    pub wall_time_s: Option<f64>,
}

pub fn tolerances() -> BTreeMap<String, f64> {
    use cdsp_core::{cdsp, cpoly, dbr_ident, dirichlet};
    [
        ("root_residual", cpoly::ROOT_RESIDUAL_TOL),
        ("boundary_root", cpoly::BOUNDARY_ROOT_TOL),
        ("gram_min_eig", dirichlet::GRAM_MIN_EIG),
        ("gram_inverse", dirichlet::INVERSE_TOL),
        ("interp_residual", dbr_ident::INTERP_RESIDUAL_TOL),
        ("deleted_row", dbr_ident::DELETED_ROW_TOL),
        ("schur_bound", dbr_ident::SCHUR_TOL),
        ("nonzero_rel", cdsp::NONZERO_REL_TOL),
        ("interval", cdsp::INTERVAL_TOL),
        ("contraction", cdsp::truncation::CONTRACTION_TOL),
        ("kernel_equality", crate::checks::KERNEL_EQUALITY_TOL),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

pub struct BuildInputs<'a> {
    pub text: &'a str,
    pub mu: &'a MeasureSpec,
    pub analysis: &'a Analysis,
    pub seed: u64,
    pub kernel_pairs: usize,
    pub kernel_max_rel_dev: f64,
    pub wall_time_s: Option<f64>,
    pub diagnostics: bool,
}

pub fn build(inp: BuildInputs<'_>) -> Report {
    let a = inp.analysis;
    let m = &a.model;
    let k = m.num_atoms();
    let two = k == 2;
    let shape = m.fact.quadratic_shape().map(|s| Shape {
        a: s.a.re,
        b: s.b.re,
        c: s.c.re,
        d: s.d.re,
    });
    let oracle = a.oracle.as_ref().map(|o| OracleSection {
        n: o.n,
        margin: o.margin,
        two_isometry_defect: o.two_isometry_defect,
        cauchy_dual_norm: o.cauchy_dual_norm,
        agler_min_eig: o.agler.iter().map(|&(n, value)| OrderValue { n, value }).collect(),
        hyperexpansivity_max_eig: o
            .hyperexpansivity
            .iter()
            .map(|&(n, value)| OrderValue { n, value })
            .collect(),
    });
    Report {
        schema_version: SCHEMA_VERSION.into(),
        measure: MeasureEcho {
            text: inp.text.into(),
            canonical: inp.mu.to_grammar(),
            atoms: inp
                .mu
                .atoms()
                .iter()
                .map(|at| AtomEcho {
                    point: at.point.into(),
                    weight: at.weight,
                    angle_deg: at.angle_degrees(),
                })
                .collect(),
        },
        factorization: FactorizationSection {
            q: cvec(m.fact.q.coeffs()),
            d: m.fact.d,
            outer_roots: cvec(&m.fact.outer_roots),
            inner_roots: cvec(&m.fact.inner_roots),
            shape,
        },
        costara: CostaraSection {
            o_mu_at_0: m.o_mu(Complex::new(0.0, 0.0)).into(),
            o_prime: cvec(&m.o_prime),
            f_prime_at_support: cvec(&m.f_prime_at_support),
            gram_f: cmat(&m.gram_f),
            b_inv: cmat(&m.b_inv),
            m: two.then(|| m.gram_f[(0, 0)].re),
            u: two.then(|| -m.gram_f[(0, 1)].re),
            v: two.then(|| -m.gram_f[(0, 1)].im),
            s: two.then(|| m.b_inv[(0, 1)].into()),
        },
        identification: IdentificationSection {
            a: cmat(&a.ident.a),
            p: cmat(&a.ident.p_factor),
            p_polys: a.ident.p_polys.iter().map(|p| poly(p, k + 1)).collect(),
            row_polys: a.ident.row_polys.iter().map(|p| poly(p, k + 1)).collect(),
            deleted_max: a.ident.deleted_max,
            interp_residual: a.ident.interp_residual,
            schur_sup: a.ident.schur_sup,
        },
        cdsp: CdspSection {
            verdict: a.verdict.verdict.as_str().into(),
            s_offdiag: a.verdict.s_offdiag.map(C::from),
            s_offdiag_row: a.verdict.s_offdiag_row.map(C::from),
            root_products: cvec(&a.verdict.root_products),
            a7_det: a.a7_det.map(C::from),
            a7_det_kernel: a.a7_det_kernel.map(C::from),
            a5_diagnostic: inp.diagnostics.then(|| a.a5.into()),
            citations: a.verdict.citations.clone(),
        },
        oracle,
        checks: ChecksSection {
            kernel_pairs: inp.kernel_pairs,
            kernel_max_rel_dev: inp.kernel_max_rel_dev,
        },
        meta: Meta {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed: inp.seed,
            tolerances: tolerances(),
            wall_time_s: inp.wall_time_s,
        },
    }
}
