//! Möbius transformations as 2×2 complex matrices acting on the extended plane.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use thiserror::Error;

/// Determinants below this (relative to the squared entry scale) are degenerate.
pub const DET_TOLERANCE: f64 = 1e-12;
/// Tolerance for the parabolic boundary, real-trace test and identity test.
pub const CLASS_TOLERANCE: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoebiusError {
    #[error("degenerate map: determinant {0:e} is numerically zero")]
    DegenerateMap(f64),
    #[error("map is projectively the identity; every point is fixed")]
    AllPointsFixed,
    #[error("generator index {index} out of range (have {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("group word exponent must be nonzero")]
    ZeroExponent,
}

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    /// Finite points compare by absolute distance; infinity only equals infinity.
    pub fn approx_eq(self, other: ExtComplex, tol: f64) -> bool {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => true,
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::Finite(Complex64::new(x, 0.0))
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{z}"),
            ExtComplex::Infinity => f.write_str("∞"),
        }
    }
}

/// Trace classification of a Möbius map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
}

impl fmt::Display for TransformClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TransformClass::Identity => "identity",
            TransformClass::Elliptic => "elliptic",
            TransformClass::Parabolic => "parabolic",
            TransformClass::Hyperbolic => "hyperbolic",
            TransformClass::Loxodromic => "loxodromic",
        };
        f.write_str(s)
    }
}

/// The map z ↦ (az + b)/(cz + d), entries row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        MoebiusMap { a, b, c, d }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        MoebiusMap { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    fn scale_sq(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).fold(0.0, f64::max)
    }

    /// Fails with `DegenerateMap` when ad − bc vanishes relative to the entry scale.
    pub fn check(&self) -> Result<(), MoebiusError> {
        let det = self.det();
        let scale = self.scale_sq().max(1.0);
        if !det.is_finite() || det.norm() < DET_TOLERANCE * scale {
            return Err(MoebiusError::DegenerateMap(det.norm()));
        }
        Ok(())
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self::new(self.a * lambda, self.b * lambda, self.c * lambda, self.d * lambda)
    }

    /// Matrix product `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> Self {
        Self::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    /// Adjugate matrix; projectively the inverse map, with the same determinant.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    /// Exact matrix inverse.
    pub fn inverse(&self) -> Result<Self, MoebiusError> {
        self.check()?;
        Ok(self.adjugate().scale(self.det().inv()))
    }

    /// Integer power; negative exponents use the matrix inverse.
    pub fn pow(&self, k: i32) -> Result<Self, MoebiusError> {
        let base = if k < 0 { self.inverse()? } else { *self };
        let mut out = Self::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base);
        }
        Ok(out)
    }

    /// Divide by the principal square root of the determinant.
    pub fn normalize(&self) -> Result<Self, MoebiusError> {
        self.check()?;
        Ok(self.scale(self.det().sqrt().inv()))
    }

    pub fn apply(&self, z: ExtComplex) -> Result<ExtComplex, MoebiusError> {
        self.check()?;
        let scale = self.scale_sq().sqrt();
        Ok(match z {
            ExtComplex::Infinity => {
                if self.c.norm() <= f64::EPSILON * scale {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let num = self.a * z + self.b;
                let den = self.c * z + self.d;
                if den.norm() <= f64::EPSILON * scale * (1.0 + z.norm()) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(num / den)
                }
            }
        })
    }

    /// Convenience for finite inputs that are known to avoid the pole.
    pub fn apply_finite(&self, z: Complex64) -> Result<Complex64, MoebiusError> {
        match self.apply(ExtComplex::Finite(z))? {
            ExtComplex::Finite(w) => Ok(w),
            ExtComplex::Infinity => Ok(Complex64::new(f64::INFINITY, f64::INFINITY)),
        }
    }

    /// tr²/det, which is invariant under rescaling the matrix.
    pub fn normalized_trace_squared(&self) -> Result<Complex64, MoebiusError> {
        self.check()?;
        let t = self.trace();
        Ok(t * t / self.det())
    }

    /// Max-entry distance between the det-1 forms, minimised over the unit
    /// scalars {±1, ±i}.
    pub fn projective_distance(&self, other: &MoebiusMap) -> Result<f64, MoebiusError> {
        let m1 = self.normalize()?;
        let m2 = other.normalize()?;
        let best = [ONE, -ONE, I, -I]
            .iter()
            .map(|&s| {
                let m2s = m2.scale(s);
                m1.entries().iter().zip(m2s.entries().iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        Ok(best)
    }

    pub fn projective_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.projective_distance(other).is_ok_and(|d| d < tol)
    }

    pub fn distance_from_identity(&self) -> Result<f64, MoebiusError> {
        self.projective_distance(&MoebiusMap::identity())
    }

    pub fn is_projective_identity(&self, tol: f64) -> bool {
        self.distance_from_identity().is_ok_and(|d| d < tol)
    }

    /// True when the det-1 form has the SU(1,1) shape d = conj(a), c = conj(b).
    pub fn is_disk_isometry(&self, tol: f64) -> bool {
        let Ok(m) = self.normalize() else {
            return false;
        };
        [m, m.scale(-ONE)].iter().any(|m| (m.d - m.a.conj()).norm() < tol && (m.c - m.b.conj()).norm() < tol)
    }

    pub fn classify(&self) -> Result<TransformClass, MoebiusError> {
        let t2 = self.normalized_trace_squared()?;
        if self.distance_from_identity()? < CLASS_TOLERANCE {
            return Ok(TransformClass::Identity);
        }
        if t2.im.abs() >= CLASS_TOLERANCE {
            return Ok(TransformClass::Loxodromic);
        }
        let t2 = t2.re;
        Ok(if (t2 - 4.0).abs() < CLASS_TOLERANCE {
            TransformClass::Parabolic
        } else if t2 < 4.0 {
            TransformClass::Elliptic
        } else {
            TransformClass::Hyperbolic
        })
    }

    /// Solutions of cz² + (d − a)z − b = 0 on the extended plane.
    pub fn fixed_points(&self) -> Result<Vec<ExtComplex>, MoebiusError> {
        let m = self.normalize()?;
        if m.distance_from_identity()? < CLASS_TOLERANCE {
            return Err(MoebiusError::AllPointsFixed);
        }
        let scale = m.scale_sq().sqrt();
        if m.c.norm() <= CLASS_TOLERANCE * scale {
            let lin = m.d - m.a;
            if lin.norm() <= CLASS_TOLERANCE * scale {
                return Ok(vec![ExtComplex::Infinity]);
            }
            return Ok(vec![ExtComplex::Finite(m.b / lin), ExtComplex::Infinity]);
        }
        // det = 1, so the discriminant is tr² − 4.
        let disc = m.trace() * m.trace() - 4.0;
        let two_c = m.c * 2.0;
        if disc.norm() < CLASS_TOLERANCE {
            return Ok(vec![ExtComplex::Finite((m.a - m.d) / two_c)]);
        }
        let root = disc.sqrt();
        Ok(vec![ExtComplex::Finite((m.a - m.d + root) / two_c), ExtComplex::Finite((m.a - m.d - root) / two_c)])
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: MoebiusMap) -> MoebiusMap {
        self.compose(&rhs)
    }
}

impl Default for MoebiusMap {
    fn default() -> Self {
        Self::identity()
    }
}

/// A word in a finite generator list: `(1-based index, nonzero exponent)` letters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupWord {
    letters: Vec<(usize, i32)>,
}

impl GroupWord {
    pub fn new(letters: Vec<(usize, i32)>) -> Result<Self, MoebiusError> {
        if letters.iter().any(|&(_, e)| e == 0) {
            return Err(MoebiusError::ZeroExponent);
        }
        Ok(GroupWord { letters })
    }

    pub fn empty() -> Self {
        GroupWord::default()
    }

    pub fn letters(&self) -> &[(usize, i32)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, &(idx, exp)) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match exp {
                1 => write!(f, "T{idx}")?,
                e => write!(f, "T{idx}^{e}")?,
            }
        }
        Ok(())
    }
}

/// Left-to-right product of the generators named by `word`.
pub fn evaluate_word(generators: &[MoebiusMap], word: &GroupWord) -> Result<MoebiusMap, MoebiusError> {
    let mut out = MoebiusMap::identity();
    for &(idx, exp) in word.letters() {
        if idx == 0 || idx > generators.len() {
            return Err(MoebiusError::IndexOutOfRange { index: idx, len: generators.len() });
        }
        out = out.compose(&generators[idx - 1].pow(exp)?);
    }
    Ok(out)
}

/// Cayley map from the upper half-plane to the disk, z ↦ (z − i)/(z + i).
pub fn cayley() -> MoebiusMap {
    MoebiusMap::new(ONE, -I, ONE, I)
}

/// Conjugate a half-plane map into the disk model.
pub fn half_plane_to_disk(m: &MoebiusMap) -> MoebiusMap {
    let c = cayley();
    c.compose(m).compose(&c.adjugate())
}

/// Conjugate a disk map into the half-plane model.
pub fn disk_to_half_plane(m: &MoebiusMap) -> MoebiusMap {
    let c = cayley();
    c.adjugate().compose(m).compose(&c)
}
