//! Metric geometry of the Poincaré disk and the upper half-plane, plus
//! regular {p,q} tessellations.
//!
//! Distances use the curvature −1 metric in both models. Areas come from
//! Gauss–Bonnet: a triangle with angles α, β, θ has area π − α − β − θ, and a
//! regular p-gon with interior angle 2π/q has area (p − 2)π − 2πp/q.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::moebius::{cayley, MoebiusMap};

/// Tolerance for boundary, angle and coincidence checks.
pub const GEOMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("points belong to different models")]
    ModelMismatch,
    #[error("points coincide; the geodesic is undefined")]
    CoincidentPoints,
    #[error("geodesic endpoints coincide")]
    CoincidentEndpoints,
    #[error("{0} is not a valid point of the model")]
    InvalidPoint(Complex64),
    #[error("ideal endpoint {0} is not on the unit circle")]
    NotIdeal(Complex64),
    #[error("angle sum {0} exceeds π")]
    AngleSumExceedsPi(f64),
    #[error("negative angle {0}")]
    NegativeAngle(f64),
    #[error("{{{p},{q}}} is not a hyperbolic tessellation")]
    NotHyperbolic { p: u32, q: u32 },
    #[error("{{{p},{q}}} needs p, q ≥ 3")]
    InvalidSchlafli { p: u32, q: u32 },
    #[error("q = {q} does not divide p = {p}; vertex cycles are not integral")]
    NonIntegerVertexCycle { p: u32, q: u32 },
    #[error("a polygon with {0} sides cannot pair its sides")]
    OddSides(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Disk,
    HalfPlane,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    model: Model,
    z: Complex64,
}

// negated comparisons so that NaN coordinates are rejected
#[allow(clippy::neg_cmp_op_on_partial_ord)]
impl ModelPoint {
    pub fn disk(z: Complex64) -> Result<Self, GeometryError> {
        if !(z.norm() < 1.0) {
            return Err(GeometryError::InvalidPoint(z));
        }
        Ok(ModelPoint { model: Model::Disk, z })
    }

    pub fn half_plane(z: Complex64) -> Result<Self, GeometryError> {
        if !(z.im > 0.0) || !z.re.is_finite() {
            return Err(GeometryError::InvalidPoint(z));
        }
        Ok(ModelPoint { model: Model::HalfPlane, z })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    fn to_disk(self) -> Complex64 {
        match self.model {
            Model::Disk => self.z,
            Model::HalfPlane => (self.z - Complex64::i()) / (self.z + Complex64::i()),
        }
    }
}

fn same_model(x: &ModelPoint, y: &ModelPoint) -> Result<Model, GeometryError> {
    if x.model != y.model {
        return Err(GeometryError::ModelMismatch);
    }
    Ok(x.model)
}

pub fn distance(x: &ModelPoint, y: &ModelPoint) -> Result<f64, GeometryError> {
    let arg = match same_model(x, y)? {
        Model::Disk => 1.0 + 2.0 * (x.z - y.z).norm_sqr() / ((1.0 - x.z.norm_sqr()) * (1.0 - y.z.norm_sqr())),
        Model::HalfPlane => 1.0 + (x.z - y.z).norm_sqr() / (2.0 * x.z.im * y.z.im),
    };
    Ok(arg.max(1.0).acosh())
}

/// Point halfway along the geodesic segment from `x` to `y`.
pub fn geodesic_midpoint(x: &ModelPoint, y: &ModelPoint) -> Result<ModelPoint, GeometryError> {
    let model = same_model(x, y)?;
    if distance(x, y)? < GEOMETRY_TOLERANCE {
        return Err(GeometryError::CoincidentPoints);
    }
    let (xd, yd) = (x.to_disk(), y.to_disk());
    // Move x to the origin, walk half the distance along the radius, move back.
    let w = (yd - xd) / (Complex64::new(1.0, 0.0) - xd.conj() * yd);
    let d = 2.0 * w.norm().atanh();
    let m0 = w / w.norm() * (d / 4.0).tanh();
    let m = (m0 + xd) / (Complex64::new(1.0, 0.0) + xd.conj() * m0);
    match model {
        Model::Disk => ModelPoint::disk(m),
        Model::HalfPlane => {
            let h = cayley().adjugate().apply_finite(m).map_err(|_| GeometryError::InvalidPoint(m))?;
            ModelPoint::half_plane(h)
        }
    }
}

/// Point of the disk geodesic between ideal points `u` and `v` nearest the origin.
///
/// Antipodal endpoints span a diameter, whose nearest point is the origin itself.
pub fn boundary_geodesic_apex(u: Complex64, v: Complex64) -> Result<ModelPoint, GeometryError> {
    for p in [u, v] {
        if (p.norm() - 1.0).abs() > GEOMETRY_TOLERANCE {
            return Err(GeometryError::NotIdeal(p));
        }
    }
    if (u - v).norm() < GEOMETRY_TOLERANCE {
        return Err(GeometryError::CoincidentEndpoints);
    }
    let sum = u + v;
    if sum.norm() < GEOMETRY_TOLERANCE {
        return ModelPoint::disk(Complex64::new(0.0, 0.0));
    }
    let half = (v / u).arg().abs() / 2.0;
    let radius = 1.0 / half.cos() - half.tan();
    ModelPoint::disk(sum / sum.norm() * radius)
}

/// Order-two rotation of the disk about `p`.
pub fn half_turn(p: &ModelPoint) -> Result<MoebiusMap, GeometryError> {
    if p.model != Model::Disk {
        return Err(GeometryError::ModelMismatch);
    }
    let one = Complex64::new(1.0, 0.0);
    let to_p = MoebiusMap::new(one, p.z, p.z.conj(), one);
    let rot = MoebiusMap::new(Complex64::i(), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), -Complex64::i());
    to_p.compose(&rot).compose(&to_p.adjugate()).normalize().map_err(|_| GeometryError::InvalidPoint(p.z))
}

/// An area together with a flag marking the Euclidean (zero-curvature) limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicArea {
    pub value: f64,
    pub euclidean_limit: bool,
}

pub fn triangle_area(alpha: f64, beta: f64, theta: f64) -> Result<HyperbolicArea, GeometryError> {
    for a in [alpha, beta, theta] {
        if a < 0.0 {
            return Err(GeometryError::NegativeAngle(a));
        }
    }
    let sum = alpha + beta + theta;
    if sum > PI + GEOMETRY_TOLERANCE {
        return Err(GeometryError::AngleSumExceedsPi(sum));
    }
    if (PI - sum).abs() <= GEOMETRY_TOLERANCE {
        return Ok(HyperbolicArea { value: 0.0, euclidean_limit: true });
    }
    Ok(HyperbolicArea { value: PI - sum, euclidean_limit: false })
}

/// Schläfli pair {p,q}: regular p-gons, q around each vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tessellation {
    pub p: u32,
    pub q: u32,
}

impl Tessellation {
    pub fn new(p: u32, q: u32) -> Result<Self, GeometryError> {
        if p < 3 || q < 3 {
            return Err(GeometryError::InvalidSchlafli { p, q });
        }
        Ok(Tessellation { p, q })
    }

    fn excess(&self) -> i64 {
        (self.p as i64 - 2) * (self.q as i64 - 2)
    }
}

impl fmt::Display for Tessellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.p, self.q)
    }
}

/// (p − 2)(q − 2) > 4
pub fn tessellation_valid(t: &Tessellation) -> bool {
    t.excess() > 4
}

pub fn regular_polygon_area(t: &Tessellation) -> Result<HyperbolicArea, GeometryError> {
    match t.excess() {
        e if e < 4 => Err(GeometryError::NotHyperbolic { p: t.p, q: t.q }),
        4 => Ok(HyperbolicArea { value: 0.0, euclidean_limit: true }),
        _ => {
            let (p, q) = (t.p as f64, t.q as f64);
            Ok(HyperbolicArea { value: (p - 2.0) * PI - p * 2.0 * PI / q, euclidean_limit: false })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceTopology {
    pub vertices: u32,
    pub edges: u32,
    pub faces: u32,
    pub euler_characteristic: i64,
    pub genus: i64,
}

/// Topology of the surface obtained from one regular p-gon whose vertices fall
/// into p/q cycles.
pub fn tessellation_topology(t: &Tessellation) -> Result<SurfaceTopology, GeometryError> {
    if t.p % 2 == 1 {
        return Err(GeometryError::OddSides(t.p));
    }
    if !t.p.is_multiple_of(t.q) {
        return Err(GeometryError::NonIntegerVertexCycle { p: t.p, q: t.q });
    }
    let (vertices, edges, faces) = (t.p / t.q, t.p / 2, 1);
    let chi = vertices as i64 - edges as i64 + faces as i64;
    Ok(SurfaceTopology { vertices, edges, faces, euler_characteristic: chi, genus: (2 - chi) / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::TransformClass;

    fn dp(re: f64, im: f64) -> ModelPoint {
        ModelPoint::disk(Complex64::new(re, im)).unwrap()
    }

    fn hp(re: f64, im: f64) -> ModelPoint {
        ModelPoint::half_plane(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn distances() {
        assert_eq!(distance(&dp(0.0, 0.0), &dp(0.0, 0.0)).unwrap(), 0.0);
        assert!((distance(&dp(0.0, 0.0), &dp(0.5, 0.0)).unwrap() - 3f64.ln()).abs() < 1e-12);
        assert!((distance(&hp(0.0, 1.0), &hp(0.0, 2.0)).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(distance(&dp(0.0, 0.0), &hp(0.0, 1.0)), Err(GeometryError::ModelMismatch));
    }

    #[test]
    fn invalid_points() {
        assert!(ModelPoint::disk(Complex64::new(1.0, 0.0)).is_err());
        assert!(ModelPoint::half_plane(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn midpoints() {
        let m = geodesic_midpoint(&dp(-0.7, 0.0), &dp(0.7, 0.0)).unwrap();
        assert!(m.z().norm() < 1e-12);
        let m = geodesic_midpoint(&dp(0.0, 0.0), &dp(0.8, 0.0)).unwrap();
        assert!((m.z() - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        let m = geodesic_midpoint(&hp(0.0, 1.0), &hp(0.0, 4.0)).unwrap();
        assert_eq!(m.model(), Model::HalfPlane);
        assert!((m.z() - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        assert_eq!(geodesic_midpoint(&dp(0.3, 0.1), &dp(0.3, 0.1)), Err(GeometryError::CoincidentPoints));
    }

    #[test]
    fn apex_of_ideal_geodesics() {
        let one = Complex64::new(1.0, 0.0);
        assert!(boundary_geodesic_apex(one, -one).unwrap().z().norm() < 1e-15);
        let a = boundary_geodesic_apex(one, Complex64::i()).unwrap().z();
        assert!((a.norm() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((a.arg() - PI / 4.0).abs() < 1e-12);
        let v = Complex64::from_polar(1.0, 2.0 * PI / 5.0);
        let a = boundary_geodesic_apex(one, v).unwrap().z();
        let expect = 1.0 / (PI / 5.0).cos() - (PI / 5.0).tan();
        assert!((a.norm() - expect).abs() < 1e-12);
        assert!((a.norm() - 0.5095254).abs() < 1e-7);
        assert!((a.arg() - PI / 5.0).abs() < 1e-12);
        let b = boundary_geodesic_apex(v, one).unwrap().z();
        assert!((a - b).norm() < 1e-15);
        assert_eq!(boundary_geodesic_apex(one, one), Err(GeometryError::CoincidentEndpoints));
        assert!(matches!(boundary_geodesic_apex(one, Complex64::new(0.5, 0.0)), Err(GeometryError::NotIdeal(_))));
    }

    #[test]
    fn half_turns() {
        let h = half_turn(&dp(0.0, 0.0)).unwrap();
        let rot = MoebiusMap::new(Complex64::i(), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), -Complex64::i());
        assert!(h.projective_eq(&rot, 1e-12));
        let p = dp(0.3, -0.4);
        let h = half_turn(&p).unwrap();
        assert!((h.apply_finite(p.z()).unwrap() - p.z()).norm() < 1e-12);
        assert!(h.trace().norm() < 1e-12);
        assert_eq!(h.classify().unwrap(), TransformClass::Elliptic);
        assert!(h.compose(&h).is_projective_identity(1e-9));
        assert!(h.is_disk_isometry(1e-12));
    }

    #[test]
    fn triangle_areas() {
        assert!((triangle_area(0.0, 0.0, 0.0).unwrap().value - PI).abs() < 1e-15);
        assert!((triangle_area(PI / 2.0, PI / 4.0, PI / 8.0).unwrap().value - PI / 8.0).abs() < 1e-15);
        let eq = triangle_area(PI / 3.0, PI / 3.0, PI / 3.0).unwrap();
        assert_eq!(eq, HyperbolicArea { value: 0.0, euclidean_limit: true });
        assert!(matches!(triangle_area(PI / 2.0, PI / 2.0, 0.1), Err(GeometryError::AngleSumExceedsPi(_))));
        assert!(matches!(triangle_area(-0.1, 0.0, 0.0), Err(GeometryError::NegativeAngle(_))));
    }

    #[test]
    fn polygon_areas() {
        let area = |p, q| regular_polygon_area(&Tessellation::new(p, q).unwrap()).unwrap().value;
        assert!((area(8, 8) - 4.0 * PI).abs() < 1e-12);
        assert!((area(10, 5) - 4.0 * PI).abs() < 1e-12);
        assert!((area(12, 12) - 8.0 * PI).abs() < 1e-12);
        assert!((area(14, 7) - 8.0 * PI).abs() < 1e-12);
        let sq = regular_polygon_area(&Tessellation::new(4, 4).unwrap()).unwrap();
        assert_eq!(sq, HyperbolicArea { value: 0.0, euclidean_limit: true });
        assert_eq!(
            regular_polygon_area(&Tessellation::new(3, 3).unwrap()),
            Err(GeometryError::NotHyperbolic { p: 3, q: 3 })
        );
    }

    #[test]
    fn validity() {
        assert!(tessellation_valid(&Tessellation::new(8, 8).unwrap()));
        assert!(!tessellation_valid(&Tessellation::new(4, 4).unwrap()));
        assert!(!tessellation_valid(&Tessellation::new(3, 6).unwrap()));
        assert!(tessellation_valid(&Tessellation::new(3, 7).unwrap()));
        assert!(Tessellation::new(2, 8).is_err());
    }

    #[test]
    fn topologies() {
        let topo = |p, q| tessellation_topology(&Tessellation::new(p, q).unwrap());
        let t = topo(8, 8).unwrap();
        assert_eq!((t.vertices, t.edges, t.faces, t.euler_characteristic, t.genus), (1, 4, 1, -2, 2));
        let t = topo(10, 5).unwrap();
        assert_eq!((t.vertices, t.edges, t.faces, t.euler_characteristic, t.genus), (2, 5, 1, -2, 2));
        let t = topo(14, 7).unwrap();
        assert_eq!((t.vertices, t.edges, t.faces, t.euler_characteristic, t.genus), (2, 7, 1, -4, 3));
        assert_eq!(topo(9, 3), Err(GeometryError::OddSides(9)));
        assert_eq!(topo(10, 4), Err(GeometryError::NonIntegerVertexCycle { p: 10, q: 4 }));
    }
}
