//! Reproducing kernel of `D(μ)` for finitely atomic `μ`.
//!
//! `K = K̃ + K̂` where `K̃` is the kernel of `O_μH²` and `K̂` the kernel of its
//! orthogonal complement, spanned by the functions
//! `f_k(z) = O_μ(z) / (O_μ′(ζ_k)(z − ζ_k))`. Their Gram matrix has
//! `‖f_k‖² = γ_k ζ_k f_k′(ζ_k)` and
//! `⟨f_r, f_t⟩ = 1 / (O_μ′(ζ_r) conj(O_μ′(ζ_t)) (1 − ζ_r conj(ζ_t)))`.

use crate::cpoly::{spectral_factorize, ComplexPoly, Factorization};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measure::MeasureSpec;
use crate::Complex;

/// Gram matrices with smallest eigenvalue at or below this are rejected.
pub const GRAM_MIN_EIG: f64 = 1e-10;
pub const INVERSE_TOL: f64 = 1e-9;
/// Allowed imaginary part of `γ_k ζ_k f_k′(ζ_k)`, relative to its modulus.
pub const NORM_RESIDUE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct CostaraModel {
    pub mu: MeasureSpec,
    pub fact: Factorization,
    /// `Π_k (z − ζ_k)`.
    pub support_poly: ComplexPoly,
    /// Unimodular constant making `O_μ(0) > 0`.
    pub phase: Complex,
    /// `O_μ′(ζ_k)`, one per atom.
    pub o_prime: Vec<Complex>,
    /// `f_k′(ζ_k)` as computed, before any projection to the reals.
    pub f_prime_at_support: Vec<Complex>,
    /// `⟨f_r, f_t⟩`, Hermitian positive definite.
    pub gram_f: CMatrix,
    pub b_inv: CMatrix,
    /// `Π_{j≠k} (z − ζ_j)`.
    reduced: Vec<ComplexPoly>,
    sqrt_d: f64,
}

impl CostaraModel {
    pub fn build(mu: &MeasureSpec) -> Result<Self> {
        let fact = spectral_factorize(&mu.weight_numerator())?;
        let points = mu.points();
        let k = points.len();
        let support_poly = ComplexPoly::from_roots(&points);
        let sqrt_d = fact.d.sqrt();

        let raw_o0 = support_poly.eval(Complex::new(0.0, 0.0)) / (sqrt_d * fact.q.eval(Complex::new(0.0, 0.0)));
        let phase = raw_o0.conj() / raw_o0.norm();

        let reduced: Vec<ComplexPoly> = (0..k)
            .map(|j| {
                let others: Vec<Complex> = points
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, &p)| p)
                    .collect();
                ComplexPoly::from_roots(&others)
            })
            .collect();

        // O′(ζ_k) = c·r_k(ζ_k) / (√d·q(ζ_k)) since the numerator vanishes at ζ_k.
        let o_prime: Vec<Complex> = (0..k)
            .map(|j| phase * reduced[j].eval(points[j]) / (sqrt_d * fact.q.eval(points[j])))
            .collect();

        let mut model = CostaraModel {
            mu: mu.clone(),
            fact,
            support_poly,
            phase,
            o_prime,
            f_prime_at_support: Vec::new(),
            gram_f: CMatrix::zeros(k, k),
            b_inv: CMatrix::zeros(k, k),
            reduced,
            sqrt_d,
        };
        model.f_prime_at_support = (0..k).map(|j| model.f_prime(j, points[j])).collect();

        let weights: Vec<f64> = mu.atoms().iter().map(|a| a.weight).collect();
        let mut gram = CMatrix::zeros(k, k);
        for r in 0..k {
            for t in 0..k {
                gram[(r, t)] = if r == t {
                    let v = points[r] * model.f_prime_at_support[r] * weights[r];
                    if v.im.abs() > NORM_RESIDUE_TOL * v.norm().max(1.0) {
                        return Err(Error::InvariantViolated {
                            what: "imaginary part of a boundary norm",
                            value: v.im.abs(),
                            limit: NORM_RESIDUE_TOL,
                        });
                    }
                    Complex::new(v.re, 0.0)
                } else {
                    let zr = points[r];
                    let zt = points[t];
                    1.0 / (model.o_prime[r] * model.o_prime[t].conj() * (1.0 - zr * zt.conj()))
                };
            }
        }
        let min_eig = linalg::min_eigenvalue(&gram);
        if min_eig <= GRAM_MIN_EIG {
            return Err(Error::SingularGram { min_eig });
        }
        let b_inv = linalg::inverse(&gram).ok_or(Error::SingularGram { min_eig })?;
        let defect = linalg::max_abs(&(&b_inv * &gram - CMatrix::identity(k, k)));
        if defect > INVERSE_TOL {
            return Err(Error::InvariantViolated {
                what: "Gram inverse defect",
                value: defect,
                limit: INVERSE_TOL,
            });
        }
        model.gram_f = gram;
        model.b_inv = b_inv;
        Ok(model)
    }

    pub fn num_atoms(&self) -> usize {
        self.o_prime.len()
    }

    pub fn points(&self) -> Vec<Complex> {
        self.mu.points()
    }

    /// `O_μ(z) = c·Π(z − ζ_k) / (√d·q(z))`.
    pub fn o_mu(&self, z: Complex) -> Complex {
        self.phase * self.support_poly.eval(z) / (self.sqrt_d * self.fact.q.eval(z))
    }

    pub fn o_mu_prime(&self, z: Complex) -> Complex {
        let (p, dp) = self.support_poly.eval_with_derivative(z);
        let (q, dq) = self.fact.q.eval_with_derivative(z);
        self.phase * (dp * q - p * dq) / (self.sqrt_d * q * q)
    }

    /// `f_k(z)`, evaluated through the reduced product so it is regular at `ζ_k`.
    pub fn f(&self, k: usize, z: Complex) -> Complex {
        self.phase * self.reduced[k].eval(z) / (self.sqrt_d * self.fact.q.eval(z) * self.o_prime[k])
    }

    pub fn f_prime(&self, k: usize, z: Complex) -> Complex {
        let (r, dr) = self.reduced[k].eval_with_derivative(z);
        let (q, dq) = self.fact.q.eval_with_derivative(z);
        self.phase * (dr * q - r * dq) / (self.sqrt_d * q * q * self.o_prime[k])
    }

    pub fn f_vec(&self, z: Complex) -> Vec<Complex> {
        (0..self.num_atoms()).map(|k| self.f(k, z)).collect()
    }

    /// `O_μ(z)·conj(O_μ(λ)) / (1 − conj(λ)z)`.
    pub fn kernel_tilde(&self, z: Complex, lam: Complex) -> Complex {
        self.o_mu(z) * self.o_mu(lam).conj() / (1.0 - lam.conj() * z)
    }

    /// `g(λ) = conj(B⁻¹)·conj(f(λ))`, so that `K̂(·, λ) = Σ_r g_r(λ) f_r`.
    pub fn hat_weights(&self, lam: Complex) -> Vec<Complex> {
        let fl = self.f_vec(lam);
        let k = self.num_atoms();
        (0..k)
            .map(|r| (0..k).map(|t| self.b_inv[(r, t)].conj() * fl[t].conj()).sum())
            .collect()
    }

    pub fn kernel_hat(&self, z: Complex, lam: Complex) -> Complex {
        self.hat_weights(lam)
            .iter()
            .enumerate()
            .map(|(r, g)| g * self.f(r, z))
            .sum()
    }

    /// `∂K̂(z, λ)/∂z`.
    pub fn kernel_hat_dz(&self, z: Complex, lam: Complex) -> Complex {
        self.hat_weights(lam)
            .iter()
            .enumerate()
            .map(|(r, g)| g * self.f_prime(r, z))
            .sum()
    }

    pub fn kernel_full(&self, z: Complex, lam: Complex) -> Complex {
        self.kernel_tilde(z, lam) + self.kernel_hat(z, lam)
    }
}
