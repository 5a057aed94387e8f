//! Seeded numeric spot checks shared by `analyze`, `selftest` and the tests.

use std::f64::consts::PI;

use cdsp_core::cdsp::{gram_monomials, gram_pairing, taylor_coefficients};
use cdsp_core::{CostaraModel, SchurIdentification};
use num_complex::Complex64 as Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20240917;
pub const KERNEL_PAIRS: usize = 200;
pub const KERNEL_RADIUS: f64 = 0.9;
pub const KERNEL_EQUALITY_TOL: f64 = 1e-8;
pub const REPRODUCING_TOL: f64 = 1e-6;

/// Uniform point in the disk of radius `r`.
pub fn random_disk_point(rng: &mut impl Rng, r: f64) -> Complex {
    let rad = r * rng.random::<f64>().sqrt();
    Complex::from_polar(rad, 2.0 * PI * rng.random::<f64>())
}

/// `max |K_B(z,w) − K(z,w)| / |K(z,w)|` over seeded random pairs.
pub fn kernel_equality(model: &CostaraModel, ident: &SchurIdentification, seed: u64, pairs: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let z = random_disk_point(&mut rng, KERNEL_RADIUS);
        let w = random_disk_point(&mut rng, KERNEL_RADIUS);
        let k = model.kernel_full(z, w);
        worst = worst.max((ident.kernel_hb(z, w) - k).norm() / k.norm());
    }
    worst
}

/// Test polynomials for the reproducing property, ascending coefficients.
pub fn reproducing_test_polys() -> Vec<Vec<Complex>> {
    let c = Complex::new;
    vec![
        vec![c(1.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, -1.0)],
        vec![c(0.5, 0.5), c(-1.0, 0.0), c(0.0, 2.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(-0.3, 0.0), c(0.2, 0.1), c(0.0, -0.7), c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.25, 0.25)],
    ]
}

/// `|⟨f, K(·, λ)⟩ − f(λ)|`, pairing Taylor coefficients of `K(·, λ)` against
/// the monomial Gram matrix.
pub struct Reproducing {
    gram: cdsp_core::linalg::CMatrix,
    terms: usize,
}

impl Reproducing {
    pub fn new(model: &CostaraModel) -> Self {
        let terms = 120;
        Reproducing {
            gram: gram_monomials(&model.mu, terms),
            terms,
        }
    }

    pub fn error(&self, model: &CostaraModel, f: &[Complex], lam: Complex) -> f64 {
        let k = taylor_coefficients(|z| model.kernel_full(z, lam), self.terms, 0.9, 2048);
        let value: Complex = f.iter().enumerate().map(|(j, c)| c * lam.powu(j as u32)).sum();
        (gram_pairing(f, &k, &self.gram) - value).norm()
    }
}

/// Seeded `λ` values of modulus at most 0.7.
pub fn reproducing_points(seed: u64, count: usize) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![Complex::from_polar(0.35, 1.1)];
    while pts.len() < count {
        pts.push(random_disk_point(&mut rng, 0.7));
    }
    pts
}

/// Closed form of `K̂` for `μ = δ₁ + δ_i` written in the published scalars
/// `a, b, p, q, s`, evaluated independently of the Gram-matrix route.
pub fn khat_two_atom_closed_form(z: Complex, lam: Complex) -> Complex {
    use cdsp_core::reference as r;
    let i = Complex::new(0.0, 1.0);
    let (a, b) = (r::A, r::B);
    let (p, q) = (r::OP_P, r::OP_Q);
    let s = Complex::new(r::S.0, r::S.1);
    let qpoly = |x: Complex| x * x - a * Complex::new(1.0, 1.0) * x + b * i;
    let lb = lam.conj();
    let bracket = (a - 1.0) * ((lb + i) * (z - i) + (lb - 1.0) * (z - 1.0))
        + s.conj() * (lb - 1.0) * (z - i) / (-i * (q - p * i).powu(2))
        + s * (lb + i) * (z - 1.0) / (i * (q + p * i).powu(2));
    b / (qpoly(z) * qpoly(lam).conj()) * bracket
}

/// `K̃` for `μ = δ₁ + δ_i` from the published roots and `d`.
pub fn ktilde_two_atom_closed_form(z: Complex, lam: Complex) -> Complex {
    use cdsp_core::reference as r;
    let i = Complex::new(0.0, 1.0);
    let a1 = Complex::new(r::ALPHA1.0, r::ALPHA1.1);
    let a2 = Complex::new(r::ALPHA2.0, r::ALPHA2.1);
    let q = |x: Complex| (x - a1) * (x - a2);
    let lb = lam.conj();
    (lb - 1.0) * (lb + i) * (z - 1.0) * (z - i) / (r::D * (1.0 - lb * z) * q(z) * q(lam).conj())
}
