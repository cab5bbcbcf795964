//! Bookkeeping for the hyperelliptic curves y² = zⁿ ∓ 1.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::hyperbolic::Tessellation;
pub use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("degree {0} is too small; a hyperelliptic curve needs degree at least 5")]
    DegreeTooSmall(u32),
}

/// Constant term of the curve: `Minus` is y² = zⁿ − 1, `Plus` is y² = zⁿ + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveSpec {
    pub degree: u32,
    pub sign: Sign,
    pub genus: u32,
    pub parity: Parity,
}

impl CurveSpec {
    /// The n distinct singularities, all on the unit circle.
    pub fn singularities(&self) -> Vec<Complex64> {
        let n = self.degree as f64;
        let offset = match self.sign {
            Sign::Minus => 0.0,
            Sign::Plus => PI / n,
        };
        (0..self.degree).map(|k| Complex64::from_polar(1.0, offset + 2.0 * PI * k as f64 / n)).collect()
    }

    /// zⁿ ∓ 1
    pub fn polynomial(&self) -> Poly {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.degree as usize + 1];
        coeffs[0] = match self.sign {
            Sign::Minus => Complex64::new(-1.0, 0.0),
            Sign::Plus => Complex64::new(1.0, 0.0),
        };
        coeffs[self.degree as usize] = Complex64::new(1.0, 0.0);
        Poly::new(coeffs)
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Minus => '-',
            Sign::Plus => '+',
        };
        write!(f, "y^2 = z^{} {} 1", self.degree, s)
    }
}

pub fn curve_from_degree(n: u32, sign: Sign) -> Result<CurveSpec, CurveError> {
    if n < 5 {
        return Err(CurveError::DegreeTooSmall(n));
    }
    let (genus, parity) = if n % 2 == 1 { ((n - 1) / 2, Parity::Odd) } else { ((n - 2) / 2, Parity::Even) };
    Ok(CurveSpec { degree: n, sign, genus, parity })
}

/// {4g,4g} for odd degree, {4g+2, 2g+1} for even degree.
pub fn tessellation_for_curve(c: &CurveSpec) -> Tessellation {
    let g = c.genus;
    match c.parity {
        Parity::Odd => Tessellation { p: 4 * g, q: 4 * g },
        Parity::Even => Tessellation { p: 4 * g + 2, q: 2 * g + 1 },
    }
}

/// The n consecutive integers standing in for the n roots of unity.
pub fn integer_roots(n: u32) -> Result<Vec<i64>, CurveError> {
    if n < 5 {
        return Err(CurveError::DegreeTooSmall(n));
    }
    let n = n as i64;
    let (lo, hi) = if n % 2 == 1 { (-(n - 1) / 2, (n - 1) / 2) } else { (-(n - 2) / 2, n / 2) };
    Ok((lo..=hi).collect())
}

/// Monic ∏(z − eᵣ).
pub fn expand_poly(roots: &[Complex64]) -> Poly {
    Poly::from_roots(roots)
}

pub fn expand_integer_roots(roots: &[i64]) -> Poly {
    let roots: Vec<Complex64> = roots.iter().map(|&r| Complex64::new(r as f64, 0.0)).collect();
    expand_poly(&roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_and_parity() {
        let c = curve_from_degree(5, Sign::Minus).unwrap();
        assert_eq!((c.genus, c.parity), (2, Parity::Odd));
        let c = curve_from_degree(8, Sign::Minus).unwrap();
        assert_eq!((c.genus, c.parity), (3, Parity::Even));
        let c = curve_from_degree(7, Sign::Plus).unwrap();
        assert_eq!((c.genus, c.parity), (3, Parity::Odd));
        for z in c.singularities() {
            assert!((z.powu(7) + 1.0).norm() < 1e-12);
        }
        assert_eq!(curve_from_degree(4, Sign::Minus), Err(CurveError::DegreeTooSmall(4)));
    }

    #[test]
    fn fifth_roots_of_unity() {
        let c = curve_from_degree(5, Sign::Minus).unwrap();
        let s = c.singularities();
        assert_eq!(s.len(), 5);
        for (k, z) in s.iter().enumerate() {
            let expect = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 5.0);
            assert!((z - expect).norm() < 1e-15);
            assert!(c.polynomial().eval(*z).norm() < 1e-14);
        }
    }

    #[test]
    fn tessellation_families() {
        let t = |n| tessellation_for_curve(&curve_from_degree(n, Sign::Minus).unwrap());
        assert_eq!(t(5), Tessellation { p: 8, q: 8 });
        assert_eq!(t(6), Tessellation { p: 10, q: 5 });
        assert_eq!(t(7), Tessellation { p: 12, q: 12 });
        assert_eq!(t(8), Tessellation { p: 14, q: 7 });
    }

    #[test]
    fn shifted_integer_roots() {
        assert_eq!(integer_roots(5).unwrap(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(integer_roots(6).unwrap(), vec![-2, -1, 0, 1, 2, 3]);
        assert_eq!(integer_roots(8).unwrap(), vec![-3, -2, -1, 0, 1, 2, 3, 4]);
        assert_eq!(integer_roots(3), Err(CurveError::DegreeTooSmall(3)));
    }

    #[test]
    fn expansions() {
        let p = expand_integer_roots(&integer_roots(7).unwrap());
        assert_eq!(p, Poly::from_real(&[0.0, -36.0, 0.0, 49.0, 0.0, -14.0, 0.0, 1.0]));
        let p = expand_integer_roots(&integer_roots(6).unwrap());
        assert_eq!(p.to_string(), "z^6 - 3z^5 - 5z^4 + 15z^3 + 4z^2 - 12z");
        assert_eq!(expand_poly(&[]), Poly::one());
    }
}
