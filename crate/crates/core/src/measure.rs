//! Finitely supported positive measures on the unit circle.
//!
//! Text grammar (`;`-separated atoms):
//!
//! ```text
//! measure := atom (";" atom)*
//! atom    := "deg:" <angle in degrees> [":w=" <weight>] | "1" | "i" | "-1" | "-i"
//! ```
//!
//! Symbolic atoms carry weight 1. Angles that are multiples of 90° map to the
//! exact points ±1, ±i.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::cpoly::LaurentPoly;
use crate::error::{Error, Result};
use crate::Complex;

pub const MAX_ATOMS: usize = 8;
const UNIT_TOL: f64 = 1e-12;
const DISTINCT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub point: Complex,
    pub weight: f64,
}

impl Atom {
    pub fn new(point: Complex, weight: f64) -> Self {
        Atom { point, weight }
    }

    /// Point `e^{iθ}` for `θ` in degrees.
    pub fn at_degrees(angle: f64, weight: f64) -> Self {
        Atom::new(point_at_degrees(angle), weight)
    }

    /// Argument in `[0, 360)`.
    pub fn angle_degrees(&self) -> f64 {
        let a = self.point.im.atan2(self.point.re).to_degrees();
        if a < 0.0 {
            a + 360.0
        } else {
            a
        }
    }
}

/// `e^{iθπ/180}`, exact at multiples of 90°.
pub fn point_at_degrees(angle: f64) -> Complex {
    let r = angle.rem_euclid(360.0);
    if r == 0.0 {
        Complex::new(1.0, 0.0)
    } else if r == 90.0 {
        Complex::new(0.0, 1.0)
    } else if r == 180.0 {
        Complex::new(-1.0, 0.0)
    } else if r == 270.0 {
        Complex::new(0.0, -1.0)
    } else {
        Complex::from_polar(1.0, angle * PI / 180.0)
    }
}

fn canonical_arg(z: Complex) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `μ = Σ γ_k δ_{ζ_k}` with atoms ordered by argument in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    atoms: Vec<Atom>,
}

impl MeasureSpec {
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() > MAX_ATOMS {
            return Err(Error::Validation(format!(
                "number of atoms must be between 1 and {MAX_ATOMS}, got {}",
                atoms.len()
            )));
        }
        for a in &atoms {
            if !(a.weight.is_finite() && a.weight > 0.0) {
                return Err(Error::Validation(format!("weight {} is not positive", a.weight)));
            }
            if !(a.point.re.is_finite() && a.point.im.is_finite())
                || (a.point.norm() - 1.0).abs() > UNIT_TOL
            {
                return Err(Error::Validation(format!("point {} is not on the unit circle", a.point)));
            }
        }
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if (atoms[i].point - atoms[j].point).norm() <= DISTINCT_TOL {
                    return Err(Error::Validation(format!(
                        "duplicate point {}",
                        atoms[i].point
                    )));
                }
            }
        }
        atoms.sort_by(|a, b| canonical_arg(a.point).total_cmp(&canonical_arg(b.point)));
        Ok(MeasureSpec { atoms })
    }

    /// Atoms at `angles` (degrees) with the given weights.
    pub fn from_degrees(angles: &[f64], weights: &[f64]) -> Result<Self> {
        if angles.len() != weights.len() {
            return Err(Error::InvalidArgument("angles and weights differ in length".into()));
        }
        MeasureSpec::new(
            angles
                .iter()
                .zip(weights)
                .map(|(&a, &w)| Atom::at_degrees(a, w))
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn points(&self) -> Vec<Complex> {
        self.atoms.iter().map(|a| a.point).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Every atom multiplied by `e^{iφ}`.
    pub fn rotated(&self, phi: f64) -> Result<Self> {
        let r = Complex::from_polar(1.0, phi);
        MeasureSpec::new(
            self.atoms
                .iter()
                .map(|a| Atom::new(a.point * r, a.weight))
                .collect(),
        )
    }

    /// Every weight multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        MeasureSpec::new(
            self.atoms
                .iter()
                .map(|a| Atom::new(a.point, a.weight * t))
                .collect(),
        )
    }

    /// Two atoms at opposite points.
    pub fn is_antipodal_pair(&self) -> bool {
        self.atoms.len() == 2 && (self.atoms[0].point + self.atoms[1].point).norm() <= DISTINCT_TOL
    }

    /// Trigonometric moment `μ̂(l) = Σ γ_k conj(ζ_k)^l`.
    pub fn moment(&self, l: i64) -> Complex {
        self.atoms
            .iter()
            .map(|a| {
                let base = if l >= 0 { a.point.conj() } else { a.point };
                base.powu(l.unsigned_abs() as u32) * a.weight
            })
            .sum()
    }

    /// `N(z) = Π_k |z − ζ_k|² + Σ_k γ_k Π_{j≠k} |z − ζ_j|²`, which equals
    /// `(1 + Σ_k γ_k/|z − ζ_k|²)·Π_k |z − ζ_k|²` on the circle.
    pub fn weight_numerator(&self) -> LaurentPoly {
        let dist: Vec<LaurentPoly> = self
            .atoms
            .iter()
            .map(|a| LaurentPoly::squared_distance(a.point))
            .collect();
        let product_except = |skip: Option<usize>| {
            dist.iter()
                .enumerate()
                .filter(|(j, _)| Some(*j) != skip)
                .fold(LaurentPoly::constant(1.0), |acc, (_, d)| &acc * d)
        };
        let mut n = product_except(None);
        for (k, a) in self.atoms.iter().enumerate() {
            let term = &product_except(Some(k)) * &LaurentPoly::constant(a.weight);
            n = &n + &term;
        }
        n
    }

    /// Canonical text form, parseable by [`parse_measure`].
    pub fn to_grammar(&self) -> String {
        self.atoms
            .iter()
            .map(|a| {
                let symbol = [
                    (Complex::new(1.0, 0.0), "1"),
                    (Complex::new(0.0, 1.0), "i"),
                    (Complex::new(-1.0, 0.0), "-1"),
                    (Complex::new(0.0, -1.0), "-i"),
                ]
                .iter()
                .find(|(p, _)| *p == a.point)
                .map(|(_, s)| *s);
                match symbol {
                    Some(s) if a.weight == 1.0 => s.to_string(),
                    _ => format!("deg:{}:w={}", a.angle_degrees(), a.weight),
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grammar())
    }
}

impl FromStr for MeasureSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_measure(s)
    }
}

fn parse_number(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} '{s}'")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{what} '{s}' is not finite")));
    }
    Ok(v)
}

fn parse_atom(text: &str) -> Result<Atom> {
    let t = text.trim();
    match t {
        "1" => return Ok(Atom::new(Complex::new(1.0, 0.0), 1.0)),
        "i" => return Ok(Atom::new(Complex::new(0.0, 1.0), 1.0)),
        "-1" => return Ok(Atom::new(Complex::new(-1.0, 0.0), 1.0)),
        "-i" => return Ok(Atom::new(Complex::new(0.0, -1.0), 1.0)),
        _ => {}
    }
    let rest = t
        .strip_prefix("deg:")
        .ok_or_else(|| Error::Parse(format!("unrecognized atom '{t}'")))?;
    let mut parts = rest.splitn(2, ':');
    let angle = parse_number(parts.next().unwrap_or(""), "angle")?;
    let weight = match parts.next() {
        None => 1.0,
        Some(w) => {
            let w = w
                .trim()
                .strip_prefix("w=")
                .ok_or_else(|| Error::Parse(format!("expected 'w=<weight>' in '{t}'")))?;
            parse_number(w, "weight")?
        }
    };
    Ok(Atom::at_degrees(angle, weight))
}

/// Parse the measure grammar described in the module docs.
pub fn parse_measure(text: &str) -> Result<MeasureSpec> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty measure".into()));
    }
    let atoms = text.split(';').map(parse_atom).collect::<Result<Vec<_>>>()?;
    MeasureSpec::new(atoms)
}
