//! Circle polyhedra: an abstract spherical polyhedron with an oriented
//! circle at each vertex, validated for edge uncoupling, c-planarity,
//! convexity and consistent orientation, and the c-links at its vertices.

mod abstract_poly;
mod framework;
mod link;

pub use abstract_poly::*;
pub use framework::*;
pub use link::*;

use serde::Serialize;

use crate::hyperbolic::{HyperbolicError, Improper};
use crate::inversive::InversiveError;

/// A failed check on a circle polyhedron, naming the offending element.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// Adjacent circles whose companion disks are nested or cover the sphere.
    EdgeCoupled { u: usize, v: usize, invdist: f64 },
    /// Adjacent circles are tangent.
    Unitary { u: usize, v: usize, invdist: f64 },
    FaceCoaxial { face: usize },
    /// The face circles have no common orthogonal circle within tolerance.
    FaceNotCPlanar { face: usize, residual: Option<f64> },
    /// Three consecutive circles of the face are coaxial; `vertex` is the middle one.
    ThreeConsecutiveCoaxial { face: usize, vertex: usize },
    /// Neither orientation of the face ortho-circle segregates every circle.
    NotConvex { face: usize, circle: usize, invdist: f64 },
    /// Faces disagree on the direction of travel along their ortho-circles.
    InconsistentOrientation { face: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CpolyError {
    #[error("invalid polyhedron: {0:?}")]
    InvalidPolyhedron(Vec<AbstractIssue>),
    #[error("expected {expected} circles, found {found}")]
    CircleCount { expected: usize, found: usize },
    #[error("check failed: {0:?}")]
    Check(Diagnostic),
    #[error("faces {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("the circles are tangent")]
    TangentPair,
    #[error("no limit point of the pair lies inside the disk")]
    FocusNotInDisk,
    #[error("face ortho-circle orientations have not been chosen")]
    NotOriented,
    #[error("orientation is inconsistent after normalization")]
    StillInconsistent,
    #[error("vertex {vertex} is improper: {reason:?}")]
    NotProperAt { vertex: usize, reason: Improper },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Inversive(#[from] InversiveError),
}

pub type Result<T> = std::result::Result<T, CpolyError>;
