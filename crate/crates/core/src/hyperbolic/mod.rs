//! Hyperbolic geometry inside a companion disk.
//!
//! A disk model is normalized by a Moebius map to the planar unit disk and
//! computations happen in the hyperboloid model of R^{2,1} with form
//! `diag(1, 1, -1)`. A circle orthogonal to the boundary becomes a unit
//! space-like normal `n`, the line's left half-plane is `{<n, X> >= 0}`, and
//! the inversive distance of two carriers is `-<n1, n2>`.

mod angle;
mod arm;
mod hyperboloid;
mod lemmas;
mod model;
mod polygon;
pub mod svg;
#[cfg(test)]
mod tests;

pub use angle::*;
pub use arm::*;
pub use hyperboloid::*;
pub use lemmas::*;
pub use model::*;
pub use polygon::*;

use crate::inversive::InversiveError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperbolicError {
    #[error("point is not strictly inside the model disk")]
    PointOnBoundary,
    #[error("carrier is not orthogonal to the model boundary (inversive distance {0})")]
    NotOrthogonal(f64),
    #[error("the lines intersect")]
    LinesIntersect,
    #[error("the lines are parallel")]
    LinesParallel,
    #[error("consecutive lines {0} and {0}+1 meet at infinity")]
    IdealVertex(usize),
    #[error("hyperideal polygon is not proper: {0:?}")]
    NotProper(Improper),
    #[error("arm chain is not convex")]
    NonConvex,
    #[error("color patterns differ")]
    Incompatible,
    #[error("black edges differ by {0}")]
    NotBlackEdgeCongruent(f64),
    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error(transparent)]
    Inversive(#[from] InversiveError),
}

pub type Result<T> = std::result::Result<T, HyperbolicError>;
