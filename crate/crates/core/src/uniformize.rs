//! Side transformations of the regular n-gon attached to y² = zⁿ ∓ 1, the
//! hyperbolic generators obtained by fixing one side and multiplying it into
//! the others, and a numerical report on the resulting group.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{tessellation_for_curve, CurveSpec, Parity};
use crate::hyperbolic::{regular_polygon_area, tessellation_topology, GeometryError, SurfaceTopology, Tessellation};
use crate::moebius::{evaluate_word, GroupWord, MoebiusError, MoebiusMap, TransformClass};

/// Projective equality used for duplicate and identity detection.
pub const REPORT_TOLERANCE: f64 = 1e-6;
/// Residual below which a side transformation counts as an involution.
pub const INVOLUTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UniformizeError {
    #[error("genus {0} is too small; the construction needs genus at least 2")]
    GenusTooSmall(u32),
    #[error(
        "degree {degree}: 2cos(pi*{alpha}) - 1 = {value:.3e} is not positive, so the side shape is not hyperbolic"
    )]
    NonHyperbolicShape { degree: u32, alpha: Alpha, value: f64 },
    #[error("shape parameter {0} must exceed 1")]
    InvalidShape(f64),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A reduced fraction num/den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alpha {
    pub num: u32,
    pub den: u32,
}

impl Alpha {
    pub fn new(num: u32, den: u32) -> Self {
        let g = gcd(num, den).max(1);
        Alpha { num: num / g, den: den / g }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MursiParams {
    pub degree: u32,
    pub genus: u32,
    pub alpha: Alpha,
    pub a: f64,
    pub thetas: Vec<f64>,
}

impl MursiParams {
    /// Same rotation angles with a different shape parameter.
    pub fn with_shape(&self, a: f64) -> Result<Self, UniformizeError> {
        if !(a > 1.0 && a.is_finite()) {
            return Err(UniformizeError::InvalidShape(a));
        }
        Ok(MursiParams { a, ..self.clone() })
    }

    /// a² − 1, the factor separating raw products from their det-1 forms.
    pub fn scale_factor(&self) -> f64 {
        self.a * self.a - 1.0
    }
}

/// α = (g − 1)/n, a = (2cos πα − 1)^(−1/2), θ_r = (4(r − 1) + 1)πα/2.
pub fn mursi_parameters(c: &CurveSpec) -> Result<MursiParams, UniformizeError> {
    if c.genus < 2 {
        return Err(UniformizeError::GenusTooSmall(c.genus));
    }
    let n = c.degree;
    let alpha = Alpha::new(c.genus - 1, n);
    let shape = 2.0 * (PI * alpha.value()).cos() - 1.0;
    // cos πα = 1/2 exactly when α = 1/3; rounding must not turn that into a huge a
    if shape <= 1e-12 || alpha.num * 3 == alpha.den {
        return Err(UniformizeError::NonHyperbolicShape { degree: n, alpha, value: shape });
    }
    let thetas = (1..=n).map(|r| (4 * (r - 1) + 1) as f64 * PI * alpha.value() / 2.0).collect();
    Ok(MursiParams { degree: n, genus: c.genus, alpha, a: shape.powf(-0.5), thetas })
}

/// M_r = [[a, −e^{iθ_r}], [e^{−iθ_r}, −a]], with det 1 − a².
pub fn side_transformations(p: &MursiParams) -> Vec<MoebiusMap> {
    let a = Complex64::new(p.a, 0.0);
    p.thetas
        .iter()
        .map(|&t| MoebiusMap::new(a, -Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, -t), -a))
        .collect()
}

/// S_base·S_partner in both conventions. `partner` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    pub partner: usize,
    pub raw: MoebiusMap,
    pub normalized: MoebiusMap,
}

pub fn group_generators(p: &MursiParams, base: usize) -> Result<Vec<Generator>, UniformizeError> {
    let sides = side_transformations(p);
    if base == 0 || base > sides.len() {
        return Err(UniformizeError::IndexOutOfRange { index: base, len: sides.len() });
    }
    let inv_scale = Complex64::new(1.0 / p.scale_factor(), 0.0);
    let fixed = sides[base - 1];
    Ok(sides
        .iter()
        .enumerate()
        .filter(|&(i, _)| i + 1 != base)
        .map(|(i, s)| {
            let raw = fixed.compose(s);
            Generator { partner: i + 1, raw, normalized: raw.scale(inv_scale) }
        })
        .collect())
}

/// Modulus of the interior fixed point of every side transformation, a − √(a² − 1).
pub fn fixed_point_radius(p: &MursiParams) -> f64 {
    1.0 / (p.a + (p.a * p.a - 1.0).sqrt())
}

/// Relation words in T₁ … T_m: one word of the form
/// T₁T₂⁻¹…T_m⁻¹ T₁⁻¹T₂…T_m for odd degree, and the two words
/// T₁T₂⁻¹…T_m and T₁⁻¹T₂…T_m⁻¹ for even degree.
pub fn presentation_words(c: &CurveSpec) -> Vec<(String, GroupWord)> {
    let m = c.degree as usize - 1;
    let alternating =
        |first: i32| -> Vec<(usize, i32)> { (1..=m).map(|i| (i, if i % 2 == 1 { first } else { -first })).collect() };
    let sides = tessellation_for_curve(c).p;
    let word = |letters| GroupWord::new(letters).expect("exponents are ±1");
    match c.parity {
        Parity::Odd => {
            let mut letters = alternating(1);
            letters.extend(alternating(-1));
            vec![(format!("Gamma{sides}"), word(letters))]
        }
        Parity::Even => {
            vec![(format!("Gamma{sides}.1"), word(alternating(1))), (format!("Gamma{sides}.2"), word(alternating(-1)))]
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub all_sides_involutive: bool,
    /// Distance of S_r² from the identity, per side.
    pub involution_residuals: Vec<f64>,
    /// Class of each normalized generator, in generator order.
    pub classes: Vec<TransformClass>,
    /// Real part of tr²/det per generator.
    pub trace_squared: Vec<f64>,
    /// Partner indices of generators that are the identity.
    pub identity_indices: Vec<usize>,
    /// Partner index pairs of generators that coincide.
    pub duplicate_pairs: Vec<(usize, usize)>,
    pub relation_residuals: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn is_degenerate(&self) -> bool {
        !self.identity_indices.is_empty() || !self.duplicate_pairs.is_empty()
    }

    pub fn all_hyperbolic(&self) -> bool {
        self.classes.iter().all(|&c| c == TransformClass::Hyperbolic)
    }
}

/// Builds the report from sides and generators; relation words are evaluated
/// on the normalized generators.
pub fn verify_maps(
    sides: &[MoebiusMap],
    generators: &[Generator],
    words: &[(String, GroupWord)],
    tol: f64,
) -> Result<VerificationReport, UniformizeError> {
    let involution_residuals =
        sides.iter().map(|s| s.compose(s).distance_from_identity()).collect::<Result<Vec<_>, _>>()?;
    let all_sides_involutive = involution_residuals.iter().all(|&r| r < INVOLUTION_TOLERANCE);

    let mut classes = Vec::with_capacity(generators.len());
    let mut trace_squared = Vec::with_capacity(generators.len());
    let mut identity_indices = Vec::new();
    for g in generators {
        classes.push(g.normalized.classify()?);
        trace_squared.push(g.normalized.normalized_trace_squared()?.re);
        if g.normalized.is_projective_identity(tol) {
            identity_indices.push(g.partner);
        }
    }
    let mut duplicate_pairs = Vec::new();
    for (i, gi) in generators.iter().enumerate() {
        for gj in &generators[i + 1..] {
            if identity_indices.contains(&gi.partner) || identity_indices.contains(&gj.partner) {
                continue;
            }
            if gi.normalized.projective_eq(&gj.normalized, tol) {
                duplicate_pairs.push((gi.partner, gj.partner));
            }
        }
    }

    let normalized: Vec<MoebiusMap> = generators.iter().map(|g| g.normalized).collect();
    let mut relation_residuals = BTreeMap::new();
    for (name, word) in words {
        let value = evaluate_word(&normalized, word)?;
        relation_residuals.insert(name.clone(), value.distance_from_identity()?);
    }

    Ok(VerificationReport {
        all_sides_involutive,
        involution_residuals,
        classes,
        trace_squared,
        identity_indices,
        duplicate_pairs,
        relation_residuals,
    })
}

pub fn verify_generators(result: &UniformizationResult) -> Result<VerificationReport, UniformizeError> {
    verify_generators_with(result, REPORT_TOLERANCE)
}

pub fn verify_generators_with(result: &UniformizationResult, tol: f64) -> Result<VerificationReport, UniformizeError> {
    verify_maps(&result.side_transforms, &result.generators, &presentation_words(&result.curve), tol)
}

/// Which matrices `UniformizationResult::matrices` hands out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Plain products, det = (1 − a²)².
    #[default]
    Raw,
    /// Products divided by a² − 1, det = 1.
    Normalized,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Raw => "raw",
            Convention::Normalized => "normalized",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformizationResult {
    pub curve: CurveSpec,
    pub params: MursiParams,
    pub side_transforms: Vec<MoebiusMap>,
    pub generators: Vec<Generator>,
    pub base_index: usize,
    pub convention: Convention,
    pub fixed_points: Vec<Complex64>,
    pub tessellation: Tessellation,
    pub area: f64,
    pub topology: SurfaceTopology,
    pub verification: VerificationReport,
}

impl UniformizationResult {
    /// Generator matrices in the requested convention.
    pub fn matrices(&self) -> Vec<MoebiusMap> {
        self.generators
            .iter()
            .map(|g| match self.convention {
                Convention::Raw => g.raw,
                Convention::Normalized => g.normalized,
            })
            .collect()
    }
}

pub fn uniformize(c: &CurveSpec, normalize_output: bool) -> Result<UniformizationResult, UniformizeError> {
    uniformize_from(c, 1, normalize_output, REPORT_TOLERANCE)
}

/// Full pipeline with explicit base side and report tolerance.
pub fn uniformize_from(
    c: &CurveSpec,
    base: usize,
    normalize_output: bool,
    tol: f64,
) -> Result<UniformizationResult, UniformizeError> {
    let params = mursi_parameters(c)?;
    uniformize_params(c, params, base, normalize_output, tol)
}

/// Pipeline on explicit parameters, for instance from [`MursiParams::with_shape`].
pub fn uniformize_params(
    c: &CurveSpec,
    params: MursiParams,
    base: usize,
    normalize_output: bool,
    tol: f64,
) -> Result<UniformizationResult, UniformizeError> {
    let side_transforms = side_transformations(&params);
    let generators = group_generators(&params, base)?;
    let rho = fixed_point_radius(&params);
    let fixed_points = params.thetas.iter().map(|&t| Complex64::from_polar(rho, t)).collect();
    let tessellation = tessellation_for_curve(c);
    let area = regular_polygon_area(&tessellation)?.value;
    let topology = tessellation_topology(&tessellation)?;
    let verification = verify_maps(&side_transforms, &generators, &presentation_words(c), tol)?;
    Ok(UniformizationResult {
        curve: *c,
        params,
        side_transforms,
        generators,
        base_index: base,
        convention: if normalize_output { Convention::Normalized } else { Convention::Raw },
        fixed_points,
        tessellation,
        area,
        topology,
        verification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{curve_from_degree, Sign};
    use crate::moebius::ExtComplex;

    fn params(n: u32) -> MursiParams {
        mursi_parameters(&curve_from_degree(n, Sign::Minus).unwrap()).unwrap()
    }

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(m: &MoebiusMap, want: [Complex64; 4], tol: f64) {
        for (got, want) in m.entries().iter().zip(want) {
            assert!((got - want).norm() < tol, "{got} vs {want}");
        }
    }

    #[test]
    fn parameters_by_degree() {
        let p = params(5);
        assert_eq!(p.alpha, Alpha { num: 1, den: 5 });
        assert!((p.a - 1.272019649514069).abs() < 1e-12);
        assert_eq!(params(6).alpha, Alpha { num: 1, den: 6 });
        assert!((params(6).a.powi(2) - 1.3660254037844386).abs() < 1e-12);
        let p7 = params(7);
        assert_eq!(p7.alpha, Alpha { num: 2, den: 7 });
        assert!((p7.a.powi(2) - 4.048917339522304).abs() < 1e-12);
        assert_eq!(params(8).alpha, Alpha { num: 1, den: 4 });
        assert_eq!(params(10).alpha, Alpha { num: 3, den: 10 });
        assert!((p.thetas[1] - p.thetas[0] - 2.0 * PI / 5.0).abs() < 1e-15);
    }

    #[test]
    fn unsupported_degrees() {
        let c9 = curve_from_degree(9, Sign::Minus).unwrap();
        assert!(matches!(mursi_parameters(&c9), Err(UniformizeError::NonHyperbolicShape { degree: 9, .. })));
        let c11 = curve_from_degree(11, Sign::Minus).unwrap();
        assert!(matches!(mursi_parameters(&c11), Err(UniformizeError::NonHyperbolicShape { .. })));
        let mut c = curve_from_degree(5, Sign::Minus).unwrap();
        c.genus = 1;
        assert_eq!(mursi_parameters(&c), Err(UniformizeError::GenusTooSmall(1)));
        assert!(params(5).with_shape(0.9).is_err());
    }

    #[test]
    fn first_side_of_degree_five() {
        let s = side_transformations(&params(5));
        assert_eq!(s.len(), 5);
        close(
            &s[0],
            [cx(1.2720196, 0.0), cx(-0.9510565, -0.3090170), cx(0.9510565, -0.3090170), cx(-1.2720196, 0.0)],
            1e-7,
        );
        for m in &s {
            assert!(m.trace().norm() < 1e-12);
            assert!((m.det().re - (1.0 - 1.618033988749895)).abs() < 1e-12);
            assert_eq!(m.classify().unwrap(), TransformClass::Elliptic);
            assert!(m.is_disk_isometry(1e-9));
        }
    }

    #[test]
    fn generator_products() {
        let p = params(5);
        let g = group_generators(&p, 1).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.iter().map(|g| g.partner).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
        close(
            &g[0].raw,
            [cx(1.3090170, 0.9510565), cx(1.2097626, -0.8789440), cx(1.2097626, 0.8789440), cx(1.3090170, -0.9510565)],
            1e-7,
        );
        close(
            &g[0].normalized,
            [cx(2.1180340, 1.5388418), cx(1.9574370, -1.4221612), cx(1.9574370, 1.4221612), cx(2.1180340, -1.5388418)],
            1e-7,
        );
        assert!((g[0].normalized.det() - 1.0).norm() < 1e-12);

        let g7 = group_generators(&params(7), 1).unwrap();
        close(
            &g7[2].raw,
            [cx(3.4254275, -0.7818315), cx(0.0, 1.7461149), cx(0.0, -1.7461149), cx(3.4254275, 0.7818315)],
            1e-7,
        );

        let g = group_generators(&p, 3).unwrap();
        assert_eq!(g.iter().map(|g| g.partner).collect::<Vec<_>>(), vec![1, 2, 4, 5]);
        assert_eq!(group_generators(&p, 0), Err(UniformizeError::IndexOutOfRange { index: 0, len: 5 }));
        assert_eq!(group_generators(&p, 6), Err(UniformizeError::IndexOutOfRange { index: 6, len: 5 }));
    }

    #[test]
    fn fixed_points_of_sides() {
        assert!((fixed_point_radius(&params(5)) - 0.4858683).abs() < 1e-7);
        assert!((fixed_point_radius(&params(8)) - 0.3645669).abs() < 1e-7);
        let near = params(5).with_shape(1.0 + 1e-12).unwrap();
        assert!(fixed_point_radius(&near) > 0.999);
        let p = params(7);
        let rho = fixed_point_radius(&p);
        for (m, &t) in side_transformations(&p).iter().zip(&p.thetas) {
            let z = Complex64::from_polar(rho, t);
            let fixed = m.fixed_points().unwrap();
            assert!(fixed.iter().any(|w| w.approx_eq(ExtComplex::Finite(z), 1e-12)));
        }
    }

    #[test]
    fn degree_eight_is_degenerate() {
        let r = uniformize(&curve_from_degree(8, Sign::Minus).unwrap(), false).unwrap();
        let v = &r.verification;
        assert_eq!(v.identity_indices, vec![5]);
        assert_eq!(v.duplicate_pairs, vec![(2, 6), (3, 7), (4, 8)]);
        assert!(v.is_degenerate());
        close(
            &r.generators[3].raw,
            [cx(std::f64::consts::SQRT_2, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(std::f64::consts::SQRT_2, 0.0)],
            1e-7,
        );
        assert_eq!(v.classes[3], TransformClass::Identity);
    }

    #[test]
    fn pipeline_summaries() {
        for (n, t, area, gens) in [(5, (8, 8), 4.0, 4), (6, (10, 5), 4.0, 5), (7, (12, 12), 8.0, 6)] {
            let r = uniformize(&curve_from_degree(n, Sign::Minus).unwrap(), true).unwrap();
            assert_eq!((r.tessellation.p, r.tessellation.q), t);
            assert!((r.area - area * PI).abs() < 1e-9);
            assert_eq!(r.generators.len(), gens);
            assert_eq!(r.convention, Convention::Normalized);
            let v = &r.verification;
            assert!(v.all_sides_involutive && v.all_hyperbolic() && !v.is_degenerate());
            assert!(v.trace_squared.iter().all(|&t| t > 4.0 + 1e-6));
            assert_eq!(verify_generators(&r).unwrap(), *v);
        }
    }

    #[test]
    fn relation_words() {
        let c5 = curve_from_degree(5, Sign::Minus).unwrap();
        let w = presentation_words(&c5);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0, "Gamma8");
        assert_eq!(w[0].1.to_string(), "T1 T2^-1 T3 T4^-1 T1^-1 T2 T3^-1 T4");
        let c8 = curve_from_degree(8, Sign::Minus).unwrap();
        let w = presentation_words(&c8);
        assert_eq!(w.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(), vec!["Gamma14.1", "Gamma14.2"]);
        assert_eq!(w[1].1.to_string(), "T1^-1 T2 T3^-1 T4 T5^-1 T6 T7^-1");
        let r = uniformize(&c5, false).unwrap();
        assert!(r.verification.relation_residuals["Gamma8"].is_finite());
    }
}
