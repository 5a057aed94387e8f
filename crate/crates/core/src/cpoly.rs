//! Complex polynomials, Laurent polynomials on the circle, simultaneous root
//! finding and spectral factorization of positive trigonometric polynomials.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::Complex;

const ROOT_STEP_TOL: f64 = 1e-13;
const ROOT_MAX_ITER: usize = 500;
/// Default residual tolerance handed to [`find_roots`] by the factorization.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;
/// Roots closer than this to the unit circle make a factorization degenerate.
pub const BOUNDARY_ROOT_TOL: f64 = 1e-8;

/// Polynomial with complex coefficients stored in ascending degree order.
///
/// The empty coefficient list is the zero polynomial.
#[derive(Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex>,
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<Complex>) -> Self {
        let mut p = ComplexPoly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ComplexPoly::constant(Complex::new(1.0, 0.0))
    }

    pub fn constant(c: Complex) -> Self {
        ComplexPoly::new(vec![c])
    }

    /// The monomial `c·z^n`.
    pub fn monomial(c: Complex, n: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); n + 1];
        coeffs[n] = c;
        ComplexPoly::new(coeffs)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        ComplexPoly::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    /// Monic polynomial with exactly the given roots, repeated roots included.
    pub fn from_roots(roots: &[Complex]) -> Self {
        let mut coeffs = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex::new(0.0, 0.0); coeffs.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= r * c;
            }
            coeffs = next;
        }
        ComplexPoly::new(coeffs)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if *c == Complex::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> Complex {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let zero = Complex::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> ComplexPoly {
        ComplexPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Polynomial whose coefficients are the conjugates of these, i.e.
    /// `z ↦ conj(p(conj z))`.
    pub fn conj_coeffs(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

/// Finite Laurent series `Σ c_j z^j`, `j ∈ [−k, k]`.
///
/// On the unit circle `conj(z) = 1/z`, so a Hermitian-symmetric Laurent
/// polynomial (`c_{−j} = conj(c_j)`) is real there.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, Complex>,
}

impl LaurentPoly {
    pub fn new(coeffs: impl IntoIterator<Item = (i32, Complex)>) -> Self {
        let mut p = LaurentPoly::default();
        for (j, c) in coeffs {
            *p.coeffs.entry(j).or_default() += c;
        }
        p
    }

    pub fn constant(c: f64) -> Self {
        LaurentPoly::new([(0, Complex::new(c, 0.0))])
    }

    /// `|z − ζ|²` on the circle: `2 − conj(ζ)·z − ζ·z⁻¹`.
    pub fn squared_distance(zeta: Complex) -> Self {
        LaurentPoly::new([
            (0, Complex::new(2.0, 0.0)),
            (1, -zeta.conj()),
            (-1, -zeta),
        ])
    }

    pub fn coeff(&self, j: i32) -> Complex {
        self.coeffs.get(&j).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex)> + '_ {
        self.coeffs.iter().map(|(&j, &c)| (j, c))
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|j|` whose coefficient is not negligible relative to the
    /// largest coefficient.
    pub fn bandwidth(&self) -> usize {
        let cutoff = 1e-14 * self.max_coeff_abs();
        self.coeffs
            .iter()
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|(&j, _)| j.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.max_coeff_abs().max(f64::MIN_POSITIVE);
        self.coeffs
            .iter()
            .all(|(&j, &c)| (c - self.coeff(-j).conj()).norm() <= tol * scale)
    }

    /// Evaluation at a nonzero point.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs.iter().map(|(&j, &c)| c * z.powi(j)).sum()
    }

    /// `z^k · N(z)` as an ordinary polynomial of degree `2k`.
    pub fn shifted_polynomial(&self, k: usize) -> ComplexPoly {
        let k = k as i32;
        ComplexPoly::new((-k..=k).map(|j| self.coeff(j)).collect())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.terms().chain(rhs.terms()))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(
            self.terms()
                .flat_map(|(i, a)| rhs.terms().map(move |(j, b)| (i + j, a * b))),
        )
    }
}

/// Ordering key argument: imaginary parts at round-off level count as zero and
/// the branch is (−π, π].
fn ordering_arg(z: Complex) -> f64 {
    let im = if z.im.abs() <= 1e-14 * z.norm() { 0.0 } else { z.im };
    let a = im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Sort by descending modulus, then ascending principal argument. Moduli that
/// agree to 1e−9 relative count as ties.
pub fn sort_roots(roots: &mut [Complex]) {
    roots.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let mut start = 0;
    while start < roots.len() {
        let m = roots[start].norm();
        let mut end = start + 1;
        while end < roots.len() && (m - roots[end].norm()).abs() <= 1e-9 * m.max(1e-300) {
            end += 1;
        }
        roots[start..end].sort_by(|a, b| ordering_arg(*a).total_cmp(&ordering_arg(*b)));
        start = end;
    }
}

/// All roots of `p`, by Aberth–Ehrlich simultaneous iteration on the monic
/// normalization.
///
/// Each returned root satisfies `|p(r)| ≤ tol · max|c_j| · max(1, |r|)^deg`.
/// The output is sorted by [`sort_roots`], so repeated calls return identical
/// bit patterns.
pub fn find_roots(p: &ComplexPoly, tol: f64) -> Result<Vec<Complex>> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidArgument(
                "find_roots needs a polynomial of degree >= 1".into(),
            ))
        }
    };
    let lead = p.leading().unwrap_or_default();
    if lead.norm() <= 1e-300 {
        return Err(Error::InvalidArgument("leading coefficient vanishes".into()));
    }
    let monic = p.scale(lead.inv());
    let deriv = monic.derivative();

    let radius = 1.0 + monic.coeffs()[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    // The offset keeps starting points off any symmetry axis of the input.
    let mut z: Vec<Complex> = (0..degree)
        .map(|j| Complex::from_polar(radius, 2.0 * PI * j as f64 / degree as f64 + 0.4))
        .collect();

    let mut iterations = 0;
    while iterations < ROOT_MAX_ITER {
        iterations += 1;
        let mut max_step: f64 = 0.0;
        for i in 0..degree {
            let zi = z[i];
            let pv = monic.eval(zi);
            if pv == Complex::new(0.0, 0.0) {
                continue;
            }
            let ratio = pv / deriv.eval(zi);
            let repulsion: Complex = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (zi - z[j]).inv())
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + zi.norm()));
        }
        if max_step <= ROOT_STEP_TOL {
            break;
        }
    }

    let scale = p.max_coeff_abs();
    let residual = z
        .iter()
        .map(|&r| p.eval(r).norm() / (scale * r.norm().max(1.0).powi(degree as i32)))
        .fold(0.0, f64::max);
    // Clusters of repeated roots stall above the step tolerance, so an
    // exhausted budget is only fatal when the residual test fails too.
    if residual.is_nan() || residual > tol {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    sort_roots(&mut z);
    Ok(z)
}

/// `N(z) = d·q(z)·conj(q(z))` on the unit circle with `q` monic and all roots
/// of `q` outside the closed disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub q: ComplexPoly,
    pub d: f64,
    /// Roots of `q`, `|α_j| > 1`, in [`sort_roots`] order.
    pub outer_roots: Vec<Complex>,
    /// Roots inside the disk; `inner_roots[j]` pairs with `1/conj(outer_roots[j])`.
    pub inner_roots: Vec<Complex>,
}

/// Shape parameters of a degree-two factorization written as
/// `q(z) = z² − a(1+i)z + b·i` and `Π(z − β_j) = z² − c(1+i)z + d·i`.
/// All four are real exactly when the outer roots are symmetric about the
/// diagonal, as for atoms at 1 and i.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticShape {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Factorization {
    pub fn degree(&self) -> usize {
        self.outer_roots.len()
    }

    /// `d·|q(z)|²`.
    pub fn eval_on_circle(&self, z: Complex) -> f64 {
        self.d * self.q.eval(z).norm_sqr()
    }

    pub fn quadratic_shape(&self) -> Option<QuadraticShape> {
        if self.degree() != 2 {
            return None;
        }
        let one_plus_i = Complex::new(1.0, 1.0);
        let i = Complex::new(0.0, 1.0);
        let inner = ComplexPoly::from_roots(&self.inner_roots);
        Some(QuadraticShape {
            a: -self.q.coeff(1) / one_plus_i,
            b: self.q.coeff(0) / i,
            c: -inner.coeff(1) / one_plus_i,
            d: inner.coeff(0) / i,
        })
    }
}

/// Equispaced points `e^{2πij/n}`.
pub fn circle_grid(n: usize) -> impl Iterator<Item = Complex> {
    (0..n).map(move |j| Complex::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
}

/// Fejér–Riesz-type factorization of a Laurent polynomial that is positive on
/// the unit circle.
pub fn spectral_factorize(n: &LaurentPoly) -> Result<Factorization> {
    if !n.is_hermitian(1e-12) {
        return Err(Error::InvalidArgument(
            "Laurent polynomial is not Hermitian-symmetric".into(),
        ));
    }
    let k = n.bandwidth();
    let min_on_grid = circle_grid(4 * k + 16)
        .map(|z| n.eval(z).re)
        .fold(f64::INFINITY, f64::min);
    if min_on_grid.is_nan() || min_on_grid <= 0.0 {
        return Err(Error::NotPositive { min: min_on_grid });
    }
    if k == 0 {
        return Ok(Factorization {
            q: ComplexPoly::one(),
            d: n.coeff(0).re,
            outer_roots: Vec::new(),
            inner_roots: Vec::new(),
        });
    }

    let roots = find_roots(&n.shifted_polynomial(k), ROOT_RESIDUAL_TOL)?;
    if let Some(r) = roots
        .iter()
        .find(|r| (r.norm() - 1.0).abs() <= BOUNDARY_ROOT_TOL)
    {
        return Err(Error::BoundaryRoot { modulus: r.norm() });
    }
    // Sorted by descending modulus, so the first k lie outside the circle.
    let outer: Vec<Complex> = roots[..k].to_vec();
    let mut pool: Vec<Complex> = roots[k..].to_vec();
    if outer.iter().any(|r| r.norm() <= 1.0) || pool.iter().any(|r| r.norm() >= 1.0) {
        return Err(Error::BoundaryRoot {
            modulus: roots[k].norm(),
        });
    }
    let mut inner = Vec::with_capacity(k);
    for alpha in &outer {
        let mirror = alpha.conj().inv();
        let (idx, _) = pool
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - mirror).norm().total_cmp(&(b.1 - mirror).norm()))
            .expect("pool has one root per outer root");
        inner.push(pool.swap_remove(idx));
    }
    let pairing = outer
        .iter()
        .zip(&inner)
        .map(|(a, b)| (b - a.conj().inv()).norm())
        .fold(0.0, f64::max);
    if pairing > 1e-9 {
        return Err(Error::InvariantViolated {
            what: "root pairing defect",
            value: pairing,
            limit: 1e-9,
        });
    }

    let q = ComplexPoly::from_roots(&outer);
    let one = Complex::new(1.0, 0.0);
    let d = n.eval(one).re / q.eval(one).norm_sqr();
    let fact = Factorization {
        q,
        d,
        outer_roots: outer,
        inner_roots: inner,
    };

    let scale = circle_grid(64).map(|z| n.eval(z).norm()).fold(0.0, f64::max);
    let mismatch = circle_grid(64)
        .map(|z| (n.eval(z).re - fact.eval_on_circle(z)).abs())
        .fold(0.0, f64::max);
    if mismatch > 1e-9 * scale {
        return Err(Error::InvariantViolated {
            what: "factorization identity defect",
            value: mismatch,
            limit: 1e-9 * scale,
        });
    }
    Ok(fact)
}
