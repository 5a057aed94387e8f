//! Published values for `μ = δ₁ + δ_i`, used by the self-test and regression tests.
//!
//! The `P` entries and `p_j` coefficients are known to 8 decimals, the rest to
//! about 15 significant digits.

/// `(re, im)` pairs.
pub type C = (f64, f64);

pub const MEASURE: &str = "1;i";

pub const QUARTIC: [C; 5] = [(-1.0, 0.0), (3.0, -3.0), (0.0, 8.0), (-3.0, -3.0), (1.0, 0.0)];

pub const ALPHA1: C = (2.32798295504488, 0.207814156136787);
pub const ALPHA2: C = (0.207814156136787, 2.32798295504488);
pub const BETA1: C = (0.0380424487395548, 0.426160440078774);
pub const BETA2: C = (0.426160440078774, 0.0380424487395548);

pub const A: f64 = 2.53579711118167;
pub const B: f64 = 5.46269136247034;
pub const C_SHAPE: f64 = 0.464202888818329;
pub const D: f64 = 0.183059948594236;

/// `O′(1) = −p − q i`, `O′(i) = q + p i`.
pub const OP_P: f64 = 0.954692530486206;
pub const OP_Q: f64 = 0.297593972106043;

/// Diagonal of the Gram matrix of `f₁, f₂`.
pub const M: f64 = 1.10401859575639;
/// Off-diagonal `⟨f₁, f₂⟩ = −u − v i`.
pub const U: f64 = 0.695548570053500;
pub const V: f64 = 0.127327085478790;
/// Off-diagonal of the inverse Gram matrix.
pub const S: C = (0.967575626606929, 0.177124344467703);

pub const A11: f64 = 17.1334199164530;
pub const A12: C = (-5.46269136247035, -5.46269136247035);
pub const A22: f64 = 4.71734553342817;

pub const P11: f64 = 4.13925355;
pub const P12: C = (-1.31972862, -1.31972862);
pub const P22: f64 = 1.11084575;

pub const S_OFFDIAG: f64 = -230.719263940288;
pub const ROOT_PRODUCT: C = (0.967575626606951, -5.37631791548865);

/// Tolerance for values given to about 15 digits.
pub const TOL_FULL: f64 = 1e-9;
/// Tolerance for the 8-decimal `P` and `p_j` values.
pub const TOL_P: f64 = 1e-6;
