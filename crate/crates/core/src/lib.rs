//! Uniformization of the hyperelliptic curves y² = zⁿ ∓ 1 by Fuchsian groups:
//! Möbius algebra, hyperbolic geometry, side-pairing generators, Fuchsian
//! differential equations and genus bounds for complete bipartite graphs.

pub mod curves;
pub mod embed;
pub mod fode;
pub mod golden;
pub mod hyperbolic;
pub mod moebius;
pub mod poly;
pub mod uniformize;

pub use curves::{curve_from_degree, tessellation_for_curve, CurveSpec, Parity, Sign};
pub use embed::{channel_graph, genus_range, ChannelSpec, GenusRange};
pub use hyperbolic::{regular_polygon_area, tessellation_topology, SurfaceTopology, Tessellation};
pub use moebius::{ExtComplex, GroupWord, MoebiusMap, TransformClass};
pub use uniformize::{uniformize, Convention, MursiParams, UniformizationResult, VerificationReport};

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Moebius(#[from] moebius::MoebiusError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Curve(#[from] curves::CurveError),
    #[error(transparent)]
    Geometry(#[from] hyperbolic::GeometryError),
    #[error(transparent)]
    Uniformize(#[from] uniformize::UniformizeError),
    #[error(transparent)]
    Ode(#[from] fode::OdeError),
    #[error(transparent)]
    Embed(#[from] embed::EmbedError),
    #[error(transparent)]
    Golden(#[from] golden::GoldenError),
}
