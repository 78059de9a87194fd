//! Oriented circles on the 2-sphere and the extended plane.
//!
//! An oriented circle is stored as a space-like unit vector of the
//! Lorentz space R^{3,1} with form `eta = diag(1, 1, 1, -1)`. The cap
//! with spherical center `p` and radius `r` is `(p / sin r, cot r)`, its
//! companion disk is `{q : eta(x, (q, 1)) >= 0}`, and the inversive
//! distance of two circles is `-eta(x1, x2)`.
//!
//! The plane is identified with the sphere by stereographic projection
//! from the north pole: `z = (x + iy) / (1 - z3)`. The north pole goes to
//! infinity, the equator to the unit circle, and the southern hemisphere
//! to the unit disk. The sphere carries the orientation this chart makes
//! positive, so a counterclockwise planar circle has its companion disk on
//! the left.

mod circle;
mod linalg;
mod mobius;
mod pencil;

pub use circle::*;
pub use linalg::{eta, light_points, null_space, sphere_point_of_light, SortedSvd};
pub use mobius::*;
pub use pencil::*;

/// Euclidean 3-vector.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Lorentz 4-vector `(x, y, z, t)`.
pub type Vec4 = nalgebra::Vector4<f64>;
pub use num_complex::Complex64;

/// Default tolerance for predicate decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InversiveError {
    #[error("degenerate circle: {0}")]
    DegenerateCircle(String),
    #[error("circle passes too close to the projection pole for a planar form")]
    NearPoleDegeneracy,
    #[error("the two circles coincide as unoriented circles")]
    DegeneratePair,
    #[error("repeated point in a Moebius point triple")]
    DegenerateTriple,
    #[error("the two circles are identical")]
    IdenticalCircles,
    #[error("the circles are coaxial")]
    Coaxial,
    #[error("no real circle is orthogonal to all inputs")]
    NoRealOrthoCircle,
}

pub type Result<T> = std::result::Result<T, InversiveError>;

/// `|a - b| <= tol * (1 + max(|a|, |b|))`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
