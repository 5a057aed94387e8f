//! Monomial Gram matrix of `D(μ)` and a quadrature cross-check for it.
//!
//! `‖f‖² = ‖f‖²_{H²} + ∫_𝔻 |f′|² P_μ dA` with `dA` normalized area measure,
//! which gives `⟨z^m, z^n⟩ = δ_mn + min(m, n)·μ̂(n − m)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::cpoly::ComplexPoly;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::measure::MeasureSpec;
use crate::Complex;

/// `⟨z^m, z^n⟩` for `0 ≤ m, n < size`.
pub fn gram_monomials(mu: &MeasureSpec, size: usize) -> CMatrix {
    let moments: Vec<Complex> = (0..size as i64).map(|l| mu.moment(l)).collect();
    CMatrix::from_fn(size, size, |m, n| {
        let delta = if m == n { 1.0 } else { 0.0 };
        let l = n as i64 - m as i64;
        let mom = if l >= 0 {
            moments[l as usize]
        } else {
            moments[(-l) as usize].conj()
        };
        Complex::new(delta, 0.0) + mom * m.min(n) as f64
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let step = p1 / dp;
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `P_μ(z) = Σ_k γ_k (1 − |z|²)/|z − ζ_k|²`.
pub fn poisson(mu: &MeasureSpec, z: Complex) -> f64 {
    let s = 1.0 - z.norm_sqr();
    mu.atoms()
        .iter()
        .map(|a| a.weight * s / (z - a.point).norm_sqr())
        .sum()
}

const MAX_ANGULAR: usize = 1 << 22;

fn check_level(level: u32) -> Result<()> {
    if (1..=3).contains(&level) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("quadrature level must be 1, 2 or 3, got {level}")))
    }
}

/// Radial node count at a level: 64, 128, 256.
pub fn radial_nodes(level: u32) -> usize {
    64 << (level - 1)
}

/// Angular trapezoid size on the ring of radius `r`.
pub fn angular_nodes(level: u32, r: f64) -> usize {
    let base = 512usize << (level - 1);
    let adaptive = (12.0 * level as f64 / (1.0 - r)).ceil();
    let m = if adaptive.is_finite() && adaptive < MAX_ANGULAR as f64 {
        base.max(adaptive as usize)
    } else {
        MAX_ANGULAR
    };
    m.min(MAX_ANGULAR)
}

/// Energy cross terms `∫ (z^m)′ conj((z^n)′) P_μ dA` for `0 ≤ m, n < size`,
/// by Gauss–Legendre in `r` over `[0, 1]` and ring-adaptive trapezoid in `θ`.
pub fn cross_energy_matrix(mu: &MeasureSpec, size: usize, level: u32) -> Result<CMatrix> {
    check_level(level)?;
    let (x, w) = gauss_legendre(radial_nodes(level));
    let rings: Vec<CMatrix> = x
        .par_iter()
        .zip(w.par_iter())
        .map(|(&xi, &wi)| {
            let r = 0.5 * (xi + 1.0);
            let m = angular_nodes(level, r);
            let mut acc = CMatrix::zeros(size, size);
            let mut v = vec![Complex::new(0.0, 0.0); size];
            for j in 0..m {
                let z = Complex::from_polar(r, 2.0 * PI * j as f64 / m as f64);
                let p = poisson(mu, z);
                let mut pow = Complex::new(1.0, 0.0);
                for (k, vk) in v.iter_mut().enumerate().skip(1) {
                    *vk = pow * k as f64;
                    pow *= z;
                }
                for a in 1..size {
                    for b in 1..size {
                        acc[(a, b)] += v[a] * v[b].conj() * p;
                    }
                }
            }
            // dA = 2r dr dθ/2π; dr = dx/2
            acc * Complex::new(wi * r / m as f64, 0.0)
        })
        .collect();
    let mut total = CMatrix::zeros(size, size);
    for ring in &rings {
        total += ring;
    }
    Ok(total)
}

/// `∫ |f′|² P_μ dA` for a polynomial `f`.
pub fn quadrature_energy(f: &ComplexPoly, mu: &MeasureSpec, level: u32) -> Result<f64> {
    let size = f.coeffs().len();
    if size <= 1 {
        check_level(level)?;
        return Ok(0.0);
    }
    let e = cross_energy_matrix(mu, size, level)?;
    let c = f.coeffs();
    let mut acc = Complex::new(0.0, 0.0);
    for m in 0..size {
        for n in 0..size {
            acc += c[m] * c[n].conj() * e[(m, n)];
        }
    }
    Ok(acc.re)
}

/// First `n` Taylor coefficients of `f` from `m` samples on the circle of
/// radius `rho` (discrete Cauchy integral).
pub fn taylor_coefficients(f: impl Fn(Complex) -> Complex, n: usize, rho: f64, m: usize) -> Vec<Complex> {
    let samples: Vec<Complex> = (0..m)
        .map(|j| f(Complex::from_polar(rho, 2.0 * PI * j as f64 / m as f64)))
        .collect();
    (0..n)
        .map(|k| {
            let s: Complex = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex::from_polar(1.0, -2.0 * PI * ((j * k) % m) as f64 / m as f64))
                .sum();
            s / (m as f64 * rho.powi(k as i32))
        })
        .collect()
}

/// `⟨f, g⟩` for coefficient vectors, with `gram[m][n] = ⟨z^m, z^n⟩`.
pub fn gram_pairing(f: &[Complex], g: &[Complex], gram: &CMatrix) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for (m, fm) in f.iter().enumerate() {
        for (n, gn) in g.iter().enumerate() {
            acc += fm * gn.conj() * gram[(m, n)];
        }
    }
    acc
}
