//! Subnormality of the Cauchy dual of `M_z` on `D(μ)`.
//!
//! For two atoms the verdict comes from a closed-form sufficient condition
//! on `B = (p_j/q)`: with `α₁, α₂` the roots of `q`, the dual is not
//! subnormal when `Σ_j p_j(α₁) conj(p_j(α₂))` is nonzero and neither
//! `α₁ conj(α₂)` nor `α₂ conj(α₁)` lies in `[1, ∞)`. The truncation module is
//! an independent check on finite sections of the operators.

pub mod gram;
pub mod truncation;

use rayon::prelude::*;

use crate::cpoly::ComplexPoly;
use crate::dbr_ident::SchurIdentification;
use crate::dirichlet::CostaraModel;
use crate::error::{Error, Result};
use crate::measure::{Atom, MeasureSpec};
use crate::Complex;

pub use gram::{
    cross_energy_matrix, gauss_legendre, gram_monomials, gram_pairing, quadrature_energy, taylor_coefficients,
};
pub use truncation::{agler_min_eig, agler_sum, cauchy_dual_of, TruncationWorkspace};

pub const NONZERO_REL_TOL: f64 = 1e-8;
pub const INTERVAL_TOL: f64 = 1e-10;

pub const CITE_SINGLE_ATOM: &str =
    "single atom: the Cauchy dual of M_z on D(γδ_λ) is a subnormal contraction";
pub const CITE_ANTIPODAL: &str =
    "two antipodal atoms: the Cauchy dual of M_z is subnormal";
pub const CITE_CLOSED_FORM: &str =
    "two atoms: nonzero cross term Σ p_j(α₁)conj(p_j(α₂)) with root products outside [1, ∞) rules out subnormality";
pub const CITE_INCONCLUSIVE: &str =
    "closed-form conditions not met or not applicable; no conclusion";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    NotSubnormal,
    KnownSubnormal,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NotSubnormal => "NotSubnormal",
            Verdict::KnownSubnormal => "KnownSubnormal",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdspVerdict {
    pub verdict: Verdict,
    /// Symmetrized cross term from the kernel-consistent `p_j`; two atoms only.
    pub s_offdiag: Option<Complex>,
    /// The same sum from the literal row-rule polynomials.
    pub s_offdiag_row: Option<Complex>,
    /// `α₁ conj(α₂)`, `α₂ conj(α₁)`.
    pub root_products: Vec<Complex>,
    pub citations: Vec<String>,
}

/// `Σ_j [p_j(α₁) conj(p_j(α₂)) + p_j(α₂) conj(p_j(α₁))]` and the scale
/// `max_j |p_j(α₁) p_j(α₂)|`.
pub fn cross_term(polys: &[ComplexPoly], a1: Complex, a2: Complex) -> (Complex, f64) {
    let mut s = Complex::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for p in polys {
        let (x, y) = (p.eval(a1), p.eval(a2));
        s += x * y.conj() + y * x.conj();
        scale = scale.max((x * y).norm());
    }
    (s, scale)
}

pub fn in_unit_ray(z: Complex) -> bool {
    z.im.abs() <= INTERVAL_TOL && z.re >= 1.0 - INTERVAL_TOL
}

pub fn closed_form_test(model: &CostaraModel, ident: &SchurIdentification) -> CdspVerdict {
    let k = model.num_atoms();
    let mut out = CdspVerdict {
        verdict: Verdict::Inconclusive,
        s_offdiag: None,
        s_offdiag_row: None,
        root_products: Vec::new(),
        citations: Vec::new(),
    };
    if k == 1 {
        out.verdict = Verdict::KnownSubnormal;
        out.citations.push(CITE_SINGLE_ATOM.into());
        return out;
    }
    if k != 2 {
        out.citations.push(CITE_INCONCLUSIVE.into());
        return out;
    }
    let (a1, a2) = (model.fact.outer_roots[0], model.fact.outer_roots[1]);
    let (s, scale) = cross_term(&ident.p_polys, a1, a2);
    out.s_offdiag = Some(s);
    out.s_offdiag_row = Some(cross_term(&ident.row_polys, a1, a2).0);
    out.root_products = vec![a1 * a2.conj(), a2 * a1.conj()];

    if model.mu.is_antipodal_pair() {
        out.verdict = Verdict::KnownSubnormal;
        out.citations.push(CITE_ANTIPODAL.into());
    } else if s.norm() > NONZERO_REL_TOL * scale && !out.root_products.iter().any(|&z| in_unit_ray(z)) {
        out.verdict = Verdict::NotSubnormal;
        out.citations.push(CITE_CLOSED_FORM.into());
    } else {
        out.citations.push(CITE_INCONCLUSIVE.into());
    }
    out
}

/// Scalar from the two-root coefficient construction
/// `Σ_{r,t} k_rt / (α_r² conj(α_t)²)` with
/// `k_rt = Σ_j p_j(α_r) conj(p_j(α_t)) (1 − 1/(α_r conj(α_t)))² / ((α_r − α_r′) conj(α_t − α_t′))`,
/// where `′` denotes the other root.
pub fn a7_determinant(alpha: &[Complex], polys: &[ComplexPoly]) -> Result<Complex> {
    if alpha.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "determinant scalar needs exactly two roots, got {}",
            alpha.len()
        )));
    }
    let diff = [alpha[0] - alpha[1], alpha[1] - alpha[0]];
    let mut m = Complex::new(0.0, 0.0);
    for r in 0..2 {
        for t in 0..2 {
            let cross: Complex = polys
                .iter()
                .map(|p| p.eval(alpha[r]) * p.eval(alpha[t]).conj())
                .sum();
            let prod = alpha[r] * alpha[t].conj();
            let f = 1.0 - 1.0 / prod;
            let k_rt = cross * f * f / (diff[r] * diff[t].conj());
            m += k_rt / (alpha[r].powu(2) * alpha[t].conj().powu(2));
        }
    }
    Ok(m)
}

/// With `h(z) = K̂(z, ζ₁)`: `conj(h′(0)) + Σ_r conj((h(0) − h(ζ_r)) / (0 − ζ_r))`.
/// Reported only.
pub fn a5_diagnostic(model: &CostaraModel) -> Complex {
    let points = model.points();
    let zero = Complex::new(0.0, 0.0);
    let anchor = points[0];
    let h0 = model.kernel_hat(zero, anchor);
    let mut acc = model.kernel_hat_dz(zero, anchor).conj();
    for &z in &points {
        acc += ((h0 - model.kernel_hat(z, anchor)) / (-z)).conj();
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSummary {
    pub n: usize,
    pub margin: usize,
    pub two_isometry_defect: f64,
    pub cauchy_dual_norm: f64,
    /// `(n, min eigenvalue of B_n(T′))`.
    pub agler: Vec<(usize, f64)>,
    /// `(n, max eigenvalue of B_n(T))`.
    pub hyperexpansivity: Vec<(usize, f64)>,
}

pub fn run_oracle(mu: &MeasureSpec, n: usize, nmax: usize) -> Result<OracleSummary> {
    if !(1..=10).contains(&nmax) {
        return Err(Error::InvalidArgument(format!("nmax must be in 1..=10, got {nmax}")));
    }
    let w = TruncationWorkspace::build(mu, n)?;
    let tp = w.cauchy_dual()?;
    let cauchy_dual_norm = crate::linalg::operator_norm(&crate::linalg::leading_block(&tp, w.interior()));
    let agler = (1..=nmax)
        .map(|j| Ok((j, agler_min_eig(&tp, j, w.margin)?)))
        .collect::<Result<Vec<_>>>()?;
    let hyperexpansivity = (2..=nmax.min(6))
        .map(|j| Ok((j, w.hyperexpansivity_max_eig(j)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleSummary {
        n,
        margin: w.margin,
        two_isometry_defect: w.two_isometry_defect(),
        cauchy_dual_norm,
        agler,
        hyperexpansivity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    pub weights: (f64, f64),
    /// Truncation size for the `n = 2` Agler value; `None` skips it.
    pub trunc: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            weights: (1.0, 1.0),
            trunc: Some(64),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub verdict: CdspVerdict,
    pub min_agler_n2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub outcome: Result<SweepPoint>,
}

fn sweep_one(theta: f64, opts: &SweepOptions) -> Result<SweepPoint> {
    if !(theta > 0.0 && theta <= 180.0) {
        return Err(Error::InvalidArgument(format!("angle {theta} outside (0, 180]")));
    }
    let mu = MeasureSpec::new(vec![
        Atom::at_degrees(0.0, opts.weights.0),
        Atom::at_degrees(theta, opts.weights.1),
    ])?;
    let model = CostaraModel::build(&mu)?;
    let ident = SchurIdentification::build(&model)?;
    let verdict = closed_form_test(&model, &ident);
    let min_agler_n2 = match opts.trunc {
        Some(n) => {
            let w = TruncationWorkspace::build(&mu, n)?;
            let tp = w.cauchy_dual()?;
            Some(agler_min_eig(&tp, 2, w.margin)?)
        }
        None => None,
    };
    Ok(SweepPoint { verdict, min_agler_n2 })
}

/// Runs the pipeline for `μ = w₁δ₁ + w₂δ_{e^{iθ}}` at each angle (degrees).
/// Rows come back in input order; failures stay in their row.
pub fn sweep_angle(thetas: &[f64], opts: &SweepOptions) -> Vec<SweepRow> {
    thetas
        .par_iter()
        .map(|&theta| SweepRow {
            theta,
            outcome: sweep_one(theta, opts),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::parse_measure;

    fn run(text: &str) -> CdspVerdict {
        let m = CostaraModel::build(&parse_measure(text).unwrap()).unwrap();
        let id = SchurIdentification::build(&m).unwrap();
        closed_form_test(&m, &id)
    }

    #[test]
    fn unit_ray_membership() {
        assert!(in_unit_ray(Complex::new(1.0, 0.0)));
        assert!(in_unit_ray(Complex::new(5.0, 1e-11)));
        assert!(!in_unit_ray(Complex::new(0.999, 0.0)));
        assert!(!in_unit_ray(Complex::new(2.0, 1e-9)));
    }

    #[test]
    fn verdicts_for_known_cases() {
        assert_eq!(run("1;i").verdict, Verdict::NotSubnormal);
        assert_eq!(run("1;-1").verdict, Verdict::KnownSubnormal);
        assert_eq!(run("deg:90:w=3").verdict, Verdict::KnownSubnormal);
        let three = run("1;i;-1");
        assert_eq!(three.verdict, Verdict::Inconclusive);
        assert!(three.s_offdiag.is_none());
    }

    #[test]
    fn antipodal_products_are_reported() {
        let v = run("1;-1");
        assert_eq!(v.root_products.len(), 2);
        assert!(v.s_offdiag.is_some());
    }

    #[test]
    fn sweep_keeps_order_and_errors() {
        let opts = SweepOptions {
            trunc: None,
            ..SweepOptions::default()
        };
        let rows = sweep_angle(&[90.0, 0.0, 180.0, 200.0], &opts);
        assert_eq!(rows.iter().map(|r| r.theta).collect::<Vec<_>>(), vec![90.0, 0.0, 180.0, 200.0]);
        assert_eq!(rows[0].outcome.as_ref().unwrap().verdict.verdict, Verdict::NotSubnormal);
        assert!(rows[1].outcome.is_err());
        assert_eq!(rows[2].outcome.as_ref().unwrap().verdict.verdict, Verdict::KnownSubnormal);
        assert!(rows[3].outcome.is_err());
    }

    #[test]
    fn a7_needs_two_roots() {
        assert!(a7_determinant(&[Complex::new(2.0, 0.0)], &[]).is_err());
    }
}
