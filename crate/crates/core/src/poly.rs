//! Dense univariate polynomials over `Complex64`, lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

const MAX_ABERTH_ITERS: usize = 2000;
/// Relative size below which a derivative counts as vanishing at a multiple root.
const MULTIPLICITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("root isolation did not converge for a degree-{0} polynomial")]
    RootFindingFailure(usize),
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

/// A root of a polynomial with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub location: Complex64,
    pub multiplicity: usize,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// z − root
    pub fn linear(root: Complex64) -> Self {
        Self::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    pub fn monomial(c: Complex64, power: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    /// Monic ∏(z − rᵢ).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiply by zᵏ.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Coefficients reversed: zᵈ·P(1/z) for d = deg P.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().copied().collect())
    }

    /// Zero coefficients whose magnitude is below `rel_tol` times the largest.
    pub fn pruned(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_coeff_norm();
        Self::new(self.coeffs.iter().map(|&c| if c.norm() <= cut { Complex64::new(0.0, 0.0) } else { c }).collect())
    }

    /// Number of vanishing low-order coefficients, i.e. the order of the root at 0.
    pub fn order_at_zero(&self, rel_tol: f64) -> usize {
        let cut = rel_tol * self.max_coeff_norm();
        self.coeffs.iter().take_while(|c| c.norm() <= cut).count()
    }

    /// Taylor coefficients of P(z0 + h) in powers of h.
    pub fn taylor_at(&self, z0: Complex64) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let hi = work[k + 1];
                work[k] += z0 * hi;
            }
        }
        work
    }

    /// Multiplicity of `z0` as a root, judged against `rel_tol` of the Taylor scale.
    pub fn order_at(&self, z0: Complex64, rel_tol: f64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let scale = z0.norm().max(1.0);
        let weight: f64 = self.coeffs.iter().enumerate().map(|(k, c)| c.norm() * scale.powi(k as i32)).sum();
        let taylor = self.taylor_at(z0);
        taylor.iter().enumerate().take_while(|(k, c)| c.norm() * scale.powi(*k as i32) <= rel_tol * weight).count()
    }

    /// Synthetic division by (z − root); returns quotient and remainder.
    pub fn deflate(&self, root: Complex64) -> (Self, Complex64) {
        let Some(n) = self.degree() else {
            return (Self::zero(), Complex64::new(0.0, 0.0));
        };
        if n == 0 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        let mut carry = self.coeffs[n];
        for k in (0..n).rev() {
            q[k] = carry;
            carry = self.coeffs[k] + root * carry;
        }
        (Self::new(q), carry)
    }

    /// All complex roots (with repetition) by Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Result<Vec<Complex64>, PolyError> {
        let n = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        let lead = self.leading();
        // Exact zero roots are split off so the iteration only sees a nonzero constant term.
        let zeros = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
        let reduced = Poly::new(self.coeffs[zeros..].to_vec());
        let m = n - zeros;
        if m == 0 {
            return Ok(roots);
        }
        if m == 1 {
            roots.push(-reduced.coeffs[0] / reduced.coeffs[1]);
            return Ok(roots);
        }
        let monic: Vec<Complex64> = reduced.coeffs.iter().map(|c| c / lead).collect();
        let monic = Poly { coeffs: monic };
        let dp = monic.derivative();
        let abs_coeffs: Vec<f64> = monic.coeffs.iter().map(|c| c.norm()).collect();

        // Cauchy-style radius from the geometric mean of the constant term.
        let radius = monic.coeffs[0].norm().powf(1.0 / m as f64).max(1e-3);
        let mut z: Vec<Complex64> = (0..m)
            .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4))
            .collect();
        let mut converged = vec![false; m];

        for _ in 0..MAX_ABERTH_ITERS {
            for k in 0..m {
                if converged[k] {
                    continue;
                }
                let zk = z[k];
                let pz = monic.eval(zk);
                let bound = abs_coeffs.iter().rev().fold(0.0, |acc, &c| acc * zk.norm() + c);
                if pz.norm() <= 8.0 * f64::EPSILON * bound {
                    converged[k] = true;
                    continue;
                }
                let ratio = pz / dp.eval(zk);
                let repulsion: Complex64 = (0..m).filter(|&j| j != k).map(|j| (zk - z[j]).inv()).sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if !step.is_finite() {
                    continue;
                }
                z[k] = zk - step;
                if step.norm() <= f64::EPSILON * zk.norm().max(1e-300) {
                    converged[k] = true;
                }
            }
            if converged.iter().all(|&c| c) {
                roots.extend(z);
                return Ok(roots);
            }
        }
        Err(PolyError::RootFindingFailure(n))
    }

    /// Roots grouped into multiple roots. Roots within `window` (relative) of
    /// a cluster join it only if the derivatives up to the new multiplicity
    /// vanish at the refined location, so nearby distinct roots stay apart.
    pub fn root_clusters(&self, window: f64) -> Result<Vec<RootCluster>, PolyError> {
        let mut roots = self.roots()?;
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
        for r in roots {
            let tol = window * r.norm().max(1.0);
            let mut joined = false;
            for (center, members) in clusters.iter_mut() {
                if members.iter().all(|m| (m - r).norm() > tol) {
                    continue;
                }
                let k = members.len() + 1;
                let centroid = (members.iter().sum::<Complex64>() + r) / k as f64;
                let z = self.polish(centroid, k, tol);
                if self.vanishes_to_order(z, k) {
                    members.push(r);
                    *center = z;
                    joined = true;
                    break;
                }
            }
            if !joined {
                clusters.push((r, vec![r]));
            }
        }
        Ok(clusters
            .into_iter()
            .map(|(location, members)| RootCluster { location, multiplicity: members.len() })
            .collect())
    }

    /// |p⁽ʲ⁾(z)| small against its coefficient bound for every j < k.
    fn vanishes_to_order(&self, z: Complex64, k: usize) -> bool {
        let mut d = self.clone();
        for _ in 0..k {
            let bound = d.coeffs.iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.norm());
            if d.eval(z).norm() > MULTIPLICITY_TOLERANCE * bound {
                return false;
            }
            d = d.derivative();
        }
        true
    }

    /// A root of multiplicity k is a simple root of the (k − 1)-th derivative;
    /// a few Newton steps there recover full precision.
    fn polish(&self, start: Complex64, multiplicity: usize, reach: f64) -> Complex64 {
        let mut d = self.clone();
        for _ in 1..multiplicity {
            d = d.derivative();
        }
        let dd = d.derivative();
        let mut z = start;
        for _ in 0..8 {
            let step = d.eval(z) / dd.eval(z);
            if !step.is_finite() {
                break;
            }
            // never leave the cluster: a bad step means the start was already best
            if (z - step - start).norm() > reach {
                break;
            }
            z -= step;
            if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
                break;
            }
        }
        z
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

fn fmt_coeff(c: Complex64) -> String {
    let fmt_real = |x: f64| {
        if x.fract() == 0.0 && x.abs() < 1e15 {
            format!("{}", x as i64)
        } else {
            format!("{x}")
        }
    };
    if c.im == 0.0 {
        fmt_real(c.re)
    } else if c.re == 0.0 {
        format!("{}i", fmt_real(c.im))
    } else {
        format!("({}{:+}i)", fmt_real(c.re), c.im)
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, e.g. `z^5 - 5z^3 + 4z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.norm() == 0.0 {
                continue;
            }
            let real = c.im == 0.0;
            let (neg, mag) = if real && c.re < 0.0 { (true, -c) } else { (false, c) };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = real && mag.re == 1.0;
            if k == 0 || !unit {
                f.write_str(&fmt_coeff(mag))?;
            }
            match k {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}
