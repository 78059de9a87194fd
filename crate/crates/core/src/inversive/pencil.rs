use serde::Serialize;

use super::circle::{inv_dist, OrientedCircle};
use super::linalg::{eta, eta_rows, light_points, sphere_point_of_light, SortedSvd};
use super::{close, InversiveError, Result, Vec3, Vec4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// The coaxial family spanned by two circles.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInfo {
    pub kind: FamilyKind,
    pub invdist: f64,
    /// Common points (elliptic), the tangency point (parabolic), or the two
    /// limit points (hyperbolic).
    pub points: Vec<Vec3>,
    pub span: [Vec4; 2],
    /// Basis of the orthogonal-complement family.
    pub complement: [Vec4; 2],
}

impl FamilyInfo {
    /// Whether `c` belongs to the family, i.e. lies in its span.
    pub fn contains(&self, c: &OrientedCircle, tol: f64) -> bool {
        let x = c.lorentz();
        self.complement.iter().all(|y| eta(&x, y).abs() <= tol * y.norm() * (1.0 + x.norm()))
    }

    /// Whether `c` belongs to the orthogonal-complement family.
    pub fn complement_contains(&self, c: &OrientedCircle, tol: f64) -> bool {
        let x = c.lorentz();
        self.span.iter().all(|y| eta(&x, y).abs() <= tol * (1.0 + x.norm()))
    }
}

pub fn coaxial_family(c1: &OrientedCircle, c2: &OrientedCircle, tol: f64) -> Result<FamilyInfo> {
    let (x1, x2) = (c1.lorentz(), c2.lorentz());
    let d = inv_dist(c1, c2);
    let scale = 1.0 + x1.norm().max(x2.norm());
    if (x1 - x2).norm() <= tol * scale || (x1 + x2).norm() <= tol * scale {
        return Err(InversiveError::IdenticalCircles);
    }
    let svd = SortedSvd::of_rows(&eta_rows(&[x1, x2]));
    let complement = [svd.vectors[2], svd.vectors[3]];
    let (kind, points) = if close(d.abs(), 1.0, tol) {
        let l = x1 + x2 * d.signum();
        (FamilyKind::Parabolic, vec![sphere_point_of_light(&l)])
    } else if d.abs() < 1.0 {
        let pts = light_points(&complement[0], &complement[1], 0.0).ok_or(InversiveError::DegeneratePair)?;
        (FamilyKind::Elliptic, pts.to_vec())
    } else {
        let pts = light_points(&x1, &x2, 0.0).ok_or(InversiveError::DegeneratePair)?;
        (FamilyKind::Hyperbolic, pts.to_vec())
    };
    Ok(FamilyInfo { kind, invdist: d, points, span: [x1, x2], complement })
}

/// Least-squares common ortho-circle of several circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoFit {
    /// Unit Lorentz vector with a canonical but meaningless sign.
    pub circle: OrientedCircle,
    /// `max |<O, C_i>|` over the inputs.
    pub residual: f64,
    /// Third singular value of the normalized system; near zero means coaxial.
    pub rank_gap: f64,
}

/// Singular-value threshold below which a set of circles is coaxial.
pub fn coaxial_threshold(tol: f64) -> f64 {
    (1e3 * tol).max(1e-13)
}

/// Null direction of the orthogonality system of `cs` (at least three circles).
pub fn ortho_circle_fit(cs: &[OrientedCircle], tol: f64) -> Result<OrthoFit> {
    let xs: Vec<Vec4> = cs.iter().map(|c| c.lorentz()).collect();
    let svd = SortedSvd::of_rows(&eta_rows(&xs));
    if svd.values[2] <= coaxial_threshold(tol) {
        return Err(InversiveError::Coaxial);
    }
    let y = svd.vectors[3];
    if eta(&y, &y) <= tol {
        return Err(InversiveError::NoRealOrthoCircle);
    }
    let lead = (0..4).find(|&k| y[k].abs() > 1e-12).unwrap_or(0);
    let y = if y[lead] < 0.0 { -y } else { y };
    let circle = OrientedCircle::from_lorentz(y)?;
    let residual = cs.iter().map(|c| inv_dist(&circle, c).abs()).fold(0.0, f64::max);
    Ok(OrthoFit { circle, residual, rank_gap: svd.values[2] })
}

/// The common ortho-circle of three non-coaxial circles, orientation unspecified.
pub fn ortho_circle(c1: &OrientedCircle, c2: &OrientedCircle, c3: &OrientedCircle, tol: f64) -> Result<OrientedCircle> {
    ortho_circle_fit(&[*c1, *c2, *c3], tol).map(|f| f.circle)
}

/// Whether three circles lie in one coaxial family.
pub fn are_coaxial(cs: &[OrientedCircle], tol: f64) -> bool {
    let xs: Vec<Vec4> = cs.iter().map(|c| c.lorentz()).collect();
    SortedSvd::of_rows(&eta_rows(&xs)).values[2] <= coaxial_threshold(tol)
}
