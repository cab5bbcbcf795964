//! JSON documents emitted by the CLI. Floats are rounded to a fixed number
//! of decimals and keys come out sorted, so re-serializing a parsed document
//! reproduces it byte for byte.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use fuchsian::curves::{CurveSpec, Parity, Sign};
use fuchsian::embed::GenusRange;
use fuchsian::fode::{singular_points, PointClass, SecondOrderOde};
use fuchsian::hyperbolic::{SurfaceTopology, Tessellation};
use fuchsian::moebius::{ExtComplex, MoebiusMap};
use fuchsian::uniformize::{fixed_point_radius, Convention, UniformizationResult, VerificationReport};

pub const SCHEMA_VERSION: &str = "1";

type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn matrix(m: &MoebiusMap) -> [[Pair; 2]; 2] {
    let [a, b, c, d] = m.entries();
    [[pair(a), pair(b)], [pair(c), pair(d)]]
}

#[derive(Debug, Serialize)]
pub struct CurveSummary {
    pub degree: u32,
    pub sign: &'static str,
    pub genus: u32,
    pub parity: &'static str,
    pub equation: String,
}

impl From<&CurveSpec> for CurveSummary {
    fn from(c: &CurveSpec) -> Self {
        CurveSummary {
            degree: c.degree,
            sign: match c.sign {
                Sign::Minus => "minus",
                Sign::Plus => "plus",
            },
            genus: c.genus,
            parity: match c.parity {
                Parity::Odd => "odd",
                Parity::Even => "even",
            },
            equation: c.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Parameters {
    pub alpha: [u32; 2],
    pub a: f64,
    pub a_squared_minus_one: f64,
    pub thetas: Vec<f64>,
    pub fixed_point_radius: f64,
}

#[derive(Debug, Serialize)]
pub struct LabeledMatrix {
    pub label: String,
    pub matrix: [[Pair; 2]; 2],
    pub determinant: Pair,
    pub class: String,
}

#[derive(Debug, Serialize)]
pub struct GeneratorEntry {
    pub label: String,
    pub partner: usize,
    pub matrix: [[Pair; 2]; 2],
    pub determinant: Pair,
    pub class: String,
    pub trace_squared: f64,
}

#[derive(Debug, Serialize)]
pub struct TessellationSummary {
    pub p: u32,
    pub q: u32,
}

impl From<&Tessellation> for TessellationSummary {
    fn from(t: &Tessellation) -> Self {
        TessellationSummary { p: t.p, q: t.q }
    }
}

#[derive(Debug, Serialize)]
pub struct TopologySummary {
    pub vertices: u32,
    pub edges: u32,
    pub faces: u32,
    pub euler_characteristic: i64,
    pub genus: i64,
}

impl From<&SurfaceTopology> for TopologySummary {
    fn from(t: &SurfaceTopology) -> Self {
        TopologySummary {
            vertices: t.vertices,
            edges: t.edges,
            faces: t.faces,
            euler_characteristic: t.euler_characteristic,
            genus: t.genus,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerificationSummary {
    pub all_sides_involutive: bool,
    pub max_involution_residual: f64,
    pub classes: Vec<String>,
    pub identity_indices: Vec<usize>,
    pub duplicate_pairs: Vec<[usize; 2]>,
    pub relation_residuals: std::collections::BTreeMap<String, f64>,
}

impl From<&VerificationReport> for VerificationSummary {
    fn from(v: &VerificationReport) -> Self {
        VerificationSummary {
            all_sides_involutive: v.all_sides_involutive,
            max_involution_residual: v.involution_residuals.iter().copied().fold(0.0, f64::max),
            classes: v.classes.iter().map(|c| c.to_string()).collect(),
            identity_indices: v.identity_indices.clone(),
            duplicate_pairs: v.duplicate_pairs.iter().map(|&(a, b)| [a, b]).collect(),
            relation_residuals: v.relation_residuals.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GenusRangeSummary {
    pub m: u32,
    pub n: u32,
    pub g_min: u32,
    pub g_max: u32,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub curve: CurveSummary,
    pub parameters: Parameters,
    pub convention: Convention,
    pub base: usize,
    pub side_transformations: Vec<LabeledMatrix>,
    pub generators: Vec<GeneratorEntry>,
    pub fixed_points: Vec<Pair>,
    pub tessellation: TessellationSummary,
    pub area: f64,
    pub topology: TopologySummary,
    pub verification: VerificationSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus_range: Option<GenusRangeSummary>,
}

impl ReportDocument {
    pub fn new(r: &UniformizationResult, channel: Option<(u32, u32, GenusRange)>) -> Self {
        let p = &r.params;
        let side_transformations = r
            .side_transforms
            .iter()
            .enumerate()
            .map(|(i, s)| LabeledMatrix {
                label: format!("S{}", i + 1),
                matrix: matrix(s),
                determinant: pair(s.det()),
                class: s.classify().map(|c| c.to_string()).unwrap_or_default(),
            })
            .collect();
        let generators = r
            .generators
            .iter()
            .zip(r.matrices())
            .zip(&r.verification.classes)
            .zip(&r.verification.trace_squared)
            .map(|(((g, m), class), &t2)| GeneratorEntry {
                label: format!("S{}S{}", r.base_index, g.partner),
                partner: g.partner,
                matrix: matrix(&m),
                determinant: pair(m.det()),
                class: class.to_string(),
                trace_squared: t2,
            })
            .collect();
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            curve: (&r.curve).into(),
            parameters: Parameters {
                alpha: [p.alpha.num, p.alpha.den],
                a: p.a,
                a_squared_minus_one: p.scale_factor(),
                thetas: p.thetas.clone(),
                fixed_point_radius: fixed_point_radius(p),
            },
            convention: r.convention,
            base: r.base_index,
            side_transformations,
            generators,
            fixed_points: r.fixed_points.iter().map(|&z| pair(z)).collect(),
            tessellation: (&r.tessellation).into(),
            area: r.area,
            topology: (&r.topology).into(),
            verification: (&r.verification).into(),
            genus_range: channel.map(|(m, n, g)| GenusRangeSummary { m, n, g_min: g.g_min, g_max: g.g_max }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TessellationDocument {
    pub schema_version: &'static str,
    pub tessellation: TessellationSummary,
    pub hyperbolic: bool,
    pub area: f64,
    pub euclidean_limit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySummary>,
}

#[derive(Debug, Serialize)]
pub struct PointEntry {
    /// [re, im], or null for the point at infinity.
    pub location: Option<Pair>,
    pub kind: String,
    pub p1_pole_order: usize,
    pub p2_pole_order: usize,
}

impl From<&PointClass> for PointEntry {
    fn from(p: &PointClass) -> Self {
        PointEntry {
            location: match p.location {
                ExtComplex::Finite(z) => Some(pair(z)),
                ExtComplex::Infinity => None,
            },
            kind: p.kind.to_string(),
            p1_pole_order: p.p1_order,
            p2_pole_order: p.p2_order,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OdeDocument {
    pub schema_version: &'static str,
    pub name: String,
    pub leading: String,
    pub p1: String,
    pub p2: String,
    pub params: std::collections::BTreeMap<String, Pair>,
    pub singular_points: Vec<PointEntry>,
    pub fuchsian: bool,
}

impl OdeDocument {
    pub fn new(name: String, ode: &SecondOrderOde) -> Self {
        let points: Vec<PointClass> = singular_points(ode);
        let fuchsian = points.iter().all(|p| p.kind != fuchsian::fode::PointKind::IrregularSingular);
        OdeDocument {
            schema_version: SCHEMA_VERSION,
            name,
            leading: ode.leading.to_string(),
            p1: ode.p1.to_string(),
            p2: ode.p2.to_string(),
            params: ode.params.iter().map(|(k, v)| (k.clone(), pair(*v))).collect(),
            singular_points: points.iter().map(PointEntry::from).collect(),
            fuchsian,
        }
    }
}

/// Rounds every float in the tree to `precision` decimals; −0 becomes 0 and
/// non-finite values become null.
pub fn canonicalize(v: Value, precision: usize) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if !x.is_finite() {
                return Value::Null;
            }
            let rounded: f64 = format!("{x:.precision$}").parse().unwrap_or(x);
            let rounded = if rounded == 0.0 { 0.0 } else { rounded };
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(|x| canonicalize(x, precision)).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, x)| (k, canonicalize(x, precision))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys and rounded floats, newline-terminated.
pub fn to_canonical_json<T: Serialize>(doc: &T, precision: usize) -> String {
    let value = serde_json::to_value(doc).expect("report documents serialize");
    let mut out = serde_json::to_string_pretty(&canonicalize(value, precision)).expect("values serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_and_negative_zero() {
        let v = canonicalize(json!({"b": [1.23456789, -0.00000001], "a": 3, "c": f64::MAX}), 7);
        assert_eq!(v, json!({"a": 3, "b": [1.2345679, 0.0], "c": f64::MAX}));
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with("{\"a\":3,\"b\":[1.2345679,0.0]"));
    }

    #[test]
    fn canonical_text_is_stable() {
        let doc = json!({"z": [0.1 + 0.2, -1e-12], "m": {"y": 2.5, "x": null}});
        let first = to_canonical_json(&doc, 7);
        let reparsed: Value = serde_json::from_str(&first).unwrap();
        assert_eq!(to_canonical_json(&reparsed, 7), first);
        assert!(first.find("\"m\"").unwrap() < first.find("\"z\"").unwrap());
    }
}
