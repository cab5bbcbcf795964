//! Second-order linear equations y'' + p₁y' + p₂y = 0 with rational
//! coefficients, and classification of their singular points on the extended
//! plane.
//!
//! A finite point is regular singular when p₁ has at most a simple pole and p₂
//! at most a double pole there. The point at infinity is examined through
//! w = 1/z, where the equation becomes y'' + P₁y' + P₂y = 0 with
//! P₁(w) = 2/w − p₁(1/w)/w² and P₂(w) = p₂(1/w)/w⁴.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::curves::{expand_integer_roots, integer_roots, CurveSpec, Parity};
use crate::moebius::ExtComplex;
use crate::poly::{Poly, PolyError, RootCluster};

/// Raw numerical roots closer than this (relative) are tested for being one
/// multiple root.
pub const ROOT_CLUSTER_TOLERANCE: f64 = 1e-2;
/// Distinct singular points closer than this are merged.
pub const POINT_TOLERANCE: f64 = 1e-9;
/// Coefficients below this fraction of the largest are treated as zero.
pub const COEFF_PRUNE_TOLERANCE: f64 = 1e-12;
/// Tolerance for the linear restrictions on Fuchsian data.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

/// Headroom over the pure roundoff estimate when deciding that a value is zero.
const ROUNDOFF_SAFETY: f64 = 1e3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("restriction `{restriction}` violated (residual {residual:e})")]
    ConstraintViolated { restriction: &'static str, residual: f64 },
    #[error("singular point {0} listed twice")]
    DuplicateXi(Complex64),
    #[error("coefficient lists must have equal length")]
    MismatchedLengths,
    #[error("unknown equation name `{0}`")]
    UnknownName(String),
    #[error("{name} takes {expected} parameter(s), got {got}")]
    BadParamCount { name: NamedEquation, expected: usize, got: usize },
    #[error("polynomial has repeated roots")]
    RepeatedRoots,
    #[error("polynomial degree {0} is too small (need at least 5)")]
    DegreeTooSmall(usize),
    #[error("no tabulated curve equation for degree {0} (supported: 5 to 8)")]
    UnsupportedDegree(u32),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error(transparent)]
    RootFinding(#[from] PolyError),
}

/// A reduced quotient of polynomials with its poles precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
    poles: Vec<RootCluster>,
}

impl RationalFn {
    /// Cancels common factors and records the remaining poles.
    pub fn new(num: Poly, den: Poly) -> Result<Self, OdeError> {
        Self::over_power(num, den, 1)
    }

    /// num / baseᵏ. Poles come from the roots of `base`, which are far better
    /// conditioned than the multiple roots of the expanded power.
    pub fn over_power(num: Poly, base: Poly, power: usize) -> Result<Self, OdeError> {
        let base = base.pruned(COEFF_PRUNE_TOLERANCE);
        if base.is_zero() {
            return Err(OdeError::ZeroDenominator);
        }
        let num = num.pruned(COEFF_PRUNE_TOLERANCE);
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let lead = base.leading();
        let base = base.scale(lead.inv());
        let mut den = Poly::one();
        for _ in 0..power {
            den = &den * &base;
        }
        let mut num = num.scale(lead.powi(power as i32).inv());
        let mut poles = Vec::new();
        for cluster in base.root_clusters(ROOT_CLUSTER_TOLERANCE)? {
            let multiplicity = cluster.multiplicity * power;
            let dz = root_uncertainty(&base, &cluster);
            let common = vanishing_order(&num, cluster.location, dz, multiplicity);
            for _ in 0..common {
                num = num.deflate(cluster.location).0;
                den = den.deflate(cluster.location).0;
            }
            if multiplicity > common {
                poles.push(RootCluster { location: cluster.location, multiplicity: multiplicity - common });
            }
        }
        Ok(RationalFn { num, den, poles })
    }

    pub fn zero() -> Self {
        RationalFn { num: Poly::zero(), den: Poly::one(), poles: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        RationalFn { num: Poly::constant(c), den: Poly::one(), poles: Vec::new() }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn poles(&self) -> &[RootCluster] {
        &self.poles
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn pole_order_at(&self, z: Complex64) -> usize {
        let tol = POINT_TOLERANCE * z.norm().max(1.0);
        self.poles.iter().find(|p| (p.location - z).norm() <= tol).map_or(0, |p| p.multiplicity)
    }

    /// r(1/w)·wᵏ written as an unreduced (numerator, denominator) pair.
    fn at_inverse_times(&self, k: i64) -> (Poly, Poly) {
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        // N(1/w)/D(1/w) = w^(dd − dn)·rev N(w)/rev D(w)
        let e = dd - dn + k;
        let (n, d) = (self.num.reversed(), self.den.reversed());
        if e >= 0 {
            (n.shift(e as usize), d)
        } else {
            (n, d.shift((-e) as usize))
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.leading() == Complex64::new(1.0, 0.0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Σ|cᵢ||z|ⁱ, the scale of the rounding error when evaluating `p` at `z`.
fn eval_bound(p: &Poly, z: Complex64) -> f64 {
    p.coeffs().iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.norm())
}

/// How far a computed root may sit from the true one: the first-order
/// perturbation radius (eps·bound·m!/|p⁽ᵐ⁾|)^(1/m) for multiplicity m.
fn root_uncertainty(p: &Poly, cluster: &RootCluster) -> f64 {
    let z = cluster.location;
    let m = cluster.multiplicity;
    let mut d = p.clone();
    let mut factorial = 1.0;
    for k in 1..=m {
        d = d.derivative();
        factorial *= k as f64;
    }
    let dm = d.eval(z).norm().max(f64::MIN_POSITIVE);
    (f64::EPSILON * eval_bound(p, z) * factorial / dm).powf(1.0 / m as f64)
}

/// Number of leading derivatives of `p` that are zero at `z` up to rounding
/// and a root uncertainty `dz`, capped at `max`.
fn vanishing_order(p: &Poly, z: Complex64, dz: f64, max: usize) -> usize {
    let mut d = p.clone();
    let mut order = 0;
    while order < max && !d.is_zero() {
        let next = d.derivative();
        let noise = f64::EPSILON * eval_bound(&d, z) + next.eval(z).norm() * dz;
        if d.eval(z).norm() > ROUNDOFF_SAFETY * noise {
            break;
        }
        order += 1;
        d = next;
    }
    order
}

/// Pole order at w = 0 of num/den, from low-order coefficients only.
fn pole_order_at_zero(num: &Poly, den: &Poly) -> usize {
    let num = num.pruned(COEFF_PRUNE_TOLERANCE);
    if num.is_zero() {
        return 0;
    }
    let on = num.order_at_zero(COEFF_PRUNE_TOLERANCE);
    let od = den.order_at_zero(COEFF_PRUNE_TOLERANCE);
    od.saturating_sub(on)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    Ordinary,
    RegularSingular,
    IrregularSingular,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::Ordinary => "ordinary",
            PointKind::RegularSingular => "regular singular",
            PointKind::IrregularSingular => "irregular singular",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointClass {
    pub location: ExtComplex,
    pub kind: PointKind,
    /// Pole order of the first coefficient (of P₁ at w = 0 for infinity).
    pub p1_order: usize,
    /// Pole order of the second coefficient (of P₂ at w = 0 for infinity).
    pub p2_order: usize,
}

fn kind_from_orders(p1: usize, p2: usize) -> PointKind {
    if p1 == 0 && p2 == 0 {
        PointKind::Ordinary
    } else if p1 <= 1 && p2 <= 2 {
        PointKind::RegularSingular
    } else {
        PointKind::IrregularSingular
    }
}

/// y'' + p₁y' + p₂y = 0. `leading` keeps the polynomial the equation was
/// printed with before dividing through to make y'' monic.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderOde {
    pub p1: RationalFn,
    pub p2: RationalFn,
    pub leading: Poly,
    pub params: Vec<(String, Complex64)>,
}

impl SecondOrderOde {
    pub fn new(p1: RationalFn, p2: RationalFn) -> Self {
        SecondOrderOde { p1, p2, leading: Poly::one(), params: Vec::new() }
    }

    pub fn param(&self, name: &str) -> Option<Complex64> {
        self.params.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

fn linear_product(points: &[Complex64], skip: Option<usize>, power: u32) -> Poly {
    let mut out = Poly::one();
    for (j, &x) in points.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        for _ in 0..power {
            out = &out * &Poly::linear(x);
        }
    }
    out
}

fn check_restriction(restriction: &'static str, residual: Complex64) -> Result<(), OdeError> {
    if residual.norm() > CONSTRAINT_TOLERANCE {
        return Err(OdeError::ConstraintViolated { restriction, residual: residual.norm() });
    }
    Ok(())
}

/// p₁ = Σ Aᵢ/(z − ξᵢ) + K₁, p₂ = Σ [Bᵢ/(z − ξᵢ)² + Cᵢ/(z − ξᵢ)] + K₂.
///
/// The four linear restrictions on A, B, C are enforced whenever at least one
/// finite singular point is given; they make infinity an ordinary point when
/// K₁ = K₂ = 0.
pub fn build_fuchsian(
    xis: &[Complex64],
    a: &[Complex64],
    b: &[Complex64],
    c: &[Complex64],
    k1: Complex64,
    k2: Complex64,
) -> Result<SecondOrderOde, OdeError> {
    let n = xis.len();
    if a.len() != n || b.len() != n || c.len() != n {
        return Err(OdeError::MismatchedLengths);
    }
    for (i, &x) in xis.iter().enumerate() {
        if xis[..i].iter().any(|&y| (x - y).norm() <= POINT_TOLERANCE * x.norm().max(1.0)) {
            return Err(OdeError::DuplicateXi(x));
        }
    }
    if n > 0 {
        let sum = |f: &dyn Fn(usize) -> Complex64| (0..n).map(f).sum::<Complex64>();
        check_restriction("A_1 + ... + A_n = 2", sum(&|i| a[i]) - 2.0)?;
        check_restriction("C_1 + ... + C_n = 0", sum(&|i| c[i]))?;
        check_restriction("sum(B_i) + sum(xi_i C_i) = 0", sum(&|i| b[i] + xis[i] * c[i]))?;
        check_restriction(
            "sum(2 xi_i B_i) + sum(xi_i^2 C_i) = 0",
            sum(&|i| 2.0 * xis[i] * b[i] + xis[i] * xis[i] * c[i]),
        )?;
    }

    let den1 = linear_product(xis, None, 1);
    let mut num1 = den1.scale(k1);
    for (i, &ai) in a.iter().enumerate() {
        num1 = &num1 + &linear_product(xis, Some(i), 1).scale(ai);
    }

    let den2 = linear_product(xis, None, 2);
    let mut num2 = den2.scale(k2);
    for i in 0..n {
        let others = linear_product(xis, Some(i), 2);
        num2 = &num2 + &others.scale(b[i]);
        num2 = &num2 + &(&others * &Poly::linear(xis[i])).scale(c[i]);
    }

    let p2 = RationalFn::over_power(num2, den1.clone(), 2)?;
    let mut ode = SecondOrderOde::new(RationalFn::new(num1, den1)?, p2);
    ode.params = vec![("K1".into(), k1), ("K2".into(), k2)];
    Ok(ode)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedEquation {
    Legendre,
    Tchebychev,
    Heun,
    Hypergeometric,
    WhittakerHypergeometric,
}

impl NamedEquation {
    pub const ALL: [NamedEquation; 5] = [
        NamedEquation::Legendre,
        NamedEquation::Tchebychev,
        NamedEquation::Heun,
        NamedEquation::Hypergeometric,
        NamedEquation::WhittakerHypergeometric,
    ];

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            NamedEquation::Legendre | NamedEquation::Tchebychev => &["lambda"],
            NamedEquation::Heun => &["alpha", "beta", "gamma", "delta", "epsilon", "a", "q"],
            NamedEquation::Hypergeometric => &["a", "b", "c"],
            NamedEquation::WhittakerHypergeometric => &[],
        }
    }
}

impl fmt::Display for NamedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamedEquation::Legendre => "legendre",
            NamedEquation::Tchebychev => "tchebychev",
            NamedEquation::Heun => "heun",
            NamedEquation::Hypergeometric => "hypergeometric",
            NamedEquation::WhittakerHypergeometric => "whittaker-hypergeometric",
        })
    }
}

impl FromStr for NamedEquation {
    type Err = OdeError;

    fn from_str(s: &str) -> Result<Self, OdeError> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "legendre" => Ok(NamedEquation::Legendre),
            "tchebychev" | "chebyshev" | "tchebyshev" => Ok(NamedEquation::Tchebychev),
            "heun" => Ok(NamedEquation::Heun),
            "hypergeometric" | "gauss" => Ok(NamedEquation::Hypergeometric),
            "whittakerhypergeometric" | "whittaker" => Ok(NamedEquation::WhittakerHypergeometric),
            _ => Err(OdeError::UnknownName(s.to_string())),
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Coefficient functions exactly as the classical equations are written.
pub fn named_equation(name: NamedEquation, params: &[Complex64]) -> Result<SecondOrderOde, OdeError> {
    let names = name.param_names();
    if params.len() != names.len() {
        return Err(OdeError::BadParamCount { name, expected: names.len(), got: params.len() });
    }
    let one_minus_z2 = Poly::from_real(&[1.0, 0.0, -1.0]);
    let z = Poly::from_real(&[0.0, 1.0]);
    let (p1, p2) = match name {
        NamedEquation::Legendre => {
            let l = params[0];
            (
                RationalFn::new(z.scale(real(2.0)), one_minus_z2.clone())?,
                RationalFn::new(Poly::constant(l * (l + 1.0)), one_minus_z2)?,
            )
        }
        NamedEquation::Tchebychev => {
            let l = params[0];
            (RationalFn::new(z, one_minus_z2.clone())?, RationalFn::new(Poly::constant(l * l), one_minus_z2)?)
        }
        NamedEquation::Heun => {
            let [alpha, beta, gamma, delta, eps, a, q] = params.try_into().expect("length checked");
            let (z0, z1, za) = (Poly::linear(real(0.0)), Poly::linear(real(1.0)), Poly::linear(a));
            let den = &(&z0 * &z1) * &za;
            let num1 = &(&(&z1 * &za).scale(gamma) + &(&z0 * &za).scale(delta)) + &(&z0 * &z1).scale(eps);
            let num2 = Poly::new(vec![-q, alpha * beta]);
            (RationalFn::new(num1, den.clone())?, RationalFn::new(num2, den)?)
        }
        NamedEquation::Hypergeometric => {
            let [a, b, c] = params.try_into().expect("length checked");
            let den = Poly::from_real(&[0.0, 1.0, -1.0]); // z(1 − z)
            (
                RationalFn::new(Poly::new(vec![c, -(1.0 + a + b)]), den.clone())?,
                RationalFn::new(Poly::constant(-(a * b)), den)?,
            )
        }
        NamedEquation::WhittakerHypergeometric => {
            let den = Poly::from_real(&[0.0, -25.0, 25.0]); // 25x(x − 1)
            (
                RationalFn::new(Poly::from_real(&[-20.0, 40.0]), den.clone())?,
                RationalFn::new(Poly::from_real(&[2.0]), den)?,
            )
        }
    };
    let mut ode = SecondOrderOde::new(p1, p2);
    ode.params = names.iter().map(|s| s.to_string()).zip(params.iter().copied()).collect();
    Ok(ode)
}

/// (2g + 2, 2g + 1) with g = ⌈deg/2⌉ − 1.
pub fn whittaker_ratio(degree: usize) -> (u32, u32) {
    let g = degree.div_ceil(2) as u32 - 1;
    (2 * g + 2, 2 * g + 1)
}

/// y'' + (3/16)[(f'/f)² − ((2g+2)/(2g+1))·f''/f]·y = 0.
pub fn whittaker_equation(f: &Poly) -> Result<SecondOrderOde, OdeError> {
    let deg = f.degree().unwrap_or(0);
    if deg < 5 {
        return Err(OdeError::DegreeTooSmall(deg));
    }
    if f.root_clusters(ROOT_CLUSTER_TOLERANCE)?.iter().any(|c| c.multiplicity > 1) {
        return Err(OdeError::RepeatedRoots);
    }
    let (rn, rd) = whittaker_ratio(deg);
    let ratio = rn as f64 / rd as f64;
    let df = f.derivative();
    let ddf = df.derivative();
    let num = (&(&df * &df) - &(f * &ddf).scale(real(ratio))).scale(real(3.0 / 16.0));
    let mut ode = SecondOrderOde::new(RationalFn::zero(), RationalFn::over_power(num, f.clone(), 2)?);
    ode.params = vec![("ratio".into(), real(ratio))];
    Ok(ode)
}

/// P(z)·y'' + P(z)·(2/(z − s) + k₁)·y' + P(z)·k₂·y = 0 with P the expansion of
/// the shifted integer roots; s = −1 for odd degree and +1 for even degree.
pub fn paper_curve_equation(c: &CurveSpec, k1: Complex64, k2: Complex64) -> Result<SecondOrderOde, OdeError> {
    if !(5..=8).contains(&c.degree) {
        return Err(OdeError::UnsupportedDegree(c.degree));
    }
    let roots = integer_roots(c.degree).map_err(|_| OdeError::UnsupportedDegree(c.degree))?;
    let s = match c.parity {
        Parity::Odd => real(-1.0),
        Parity::Even => real(1.0),
    };
    let pole = Poly::linear(s);
    let p1 = RationalFn::new(&Poly::constant(real(2.0)) + &pole.scale(k1), pole)?;
    let mut ode = SecondOrderOde::new(p1, RationalFn::constant(k2));
    ode.leading = expand_integer_roots(&roots);
    ode.params = vec![("k1".into(), k1), ("k2".into(), k2)];
    Ok(ode)
}

pub fn classify_point(ode: &SecondOrderOde, pt: ExtComplex) -> PointClass {
    let (p1_order, p2_order) = match pt {
        ExtComplex::Finite(z) => (ode.p1.pole_order_at(z), ode.p2.pole_order_at(z)),
        ExtComplex::Infinity => {
            // P₁ = 2/w − p₁(1/w)/w² = (2·d − w·n)/(w·d) with n/d = p₁(1/w)/w².
            let (n1, d1) = ode.p1.at_inverse_times(-2);
            let num1 = &d1.scale(real(2.0)) - &n1.shift(1);
            let den1 = d1.shift(1);
            let (n2, d2) = ode.p2.at_inverse_times(-4);
            (pole_order_at_zero(&num1, &den1), pole_order_at_zero(&n2, &d2))
        }
    };
    PointClass { location: pt, kind: kind_from_orders(p1_order, p2_order), p1_order, p2_order }
}

/// Every finite pole of p₁ or p₂, then infinity, each classified.
pub fn singular_points(ode: &SecondOrderOde) -> Vec<PointClass> {
    let mut finite: Vec<Complex64> = Vec::new();
    for pole in ode.p1.poles().iter().chain(ode.p2.poles()) {
        let z = pole.location;
        if !finite.iter().any(|&w| (w - z).norm() <= POINT_TOLERANCE * z.norm().max(1.0)) {
            finite.push(z);
        }
    }
    finite.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    finite
        .into_iter()
        .map(ExtComplex::Finite)
        .chain(std::iter::once(ExtComplex::Infinity))
        .map(|pt| classify_point(ode, pt))
        .collect()
}

pub fn is_fuchsian(ode: &SecondOrderOde) -> bool {
    singular_points(ode).iter().all(|p| p.kind != PointKind::IrregularSingular)
}
