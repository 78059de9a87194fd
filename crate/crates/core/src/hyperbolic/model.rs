use nalgebra::Matrix4;

use super::angle::{acos_theta, ComplexAngle};
use super::hyperboloid::{mink, perpendicular_feet, HLine, HPoint};
use super::{HyperbolicError, Result};
use crate::inversive::{inv_dist, MoebiusMap, OrientedCircle, Vec3, Vec4};

/// The interior of a companion disk with its complete hyperbolic metric.
///
/// Points and lines are handled in the hyperboloid model after a Moebius
/// map sends the disk to the southern hemisphere, i.e. the planar unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskModel {
    boundary: OrientedCircle,
    to_std: MoebiusMap,
    from_std: MoebiusMap,
    lorentz: Matrix4<f64>,
    lorentz_inv: Matrix4<f64>,
}

/// An oriented geodesic of a model, stored with its carrier circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedLine {
    pub carrier: OrientedCircle,
    pub line: HLine,
}

impl DiskModel {
    pub fn new(boundary: OrientedCircle) -> DiskModel {
        DiskModel::with_normalization(boundary, MoebiusMap::standardizing(&boundary))
    }

    /// The model with a caller-chosen normalizing map, which must send the
    /// boundary to the counterclockwise unit circle.
    pub fn with_normalization(boundary: OrientedCircle, to_std: MoebiusMap) -> DiskModel {
        let from_std = to_std.inverse();
        DiskModel {
            boundary,
            lorentz: to_std.lorentz_matrix(),
            lorentz_inv: from_std.lorentz_matrix(),
            to_std,
            from_std,
        }
    }

    /// The centered unit disk.
    pub fn unit() -> DiskModel {
        let equator = OrientedCircle::from_lorentz(Vec4::new(0.0, 0.0, -1.0, 0.0)).expect("space-like");
        DiskModel::with_normalization(equator, MoebiusMap::identity())
    }

    pub fn boundary(&self) -> &OrientedCircle {
        &self.boundary
    }

    pub fn normalization(&self) -> &MoebiusMap {
        &self.to_std
    }

    /// Hyperboloid point of a sphere point inside the disk.
    pub fn point(&self, q: &Vec3) -> Result<HPoint> {
        let s = self.to_std.apply_sphere(q);
        if !(s.z < -1e-12) {
            return Err(HyperbolicError::PointOnBoundary);
        }
        Ok(HPoint(Vec3::new(s.x, s.y, 1.0) / -s.z))
    }

    pub fn sphere_point(&self, x: &HPoint) -> Vec3 {
        let s = Vec3::new(x.0.x, x.0.y, -1.0) / x.0.z;
        self.from_std.apply_sphere(&(s / s.norm()))
    }

    /// Sphere point of an ideal point given as a light-like vector.
    pub fn ideal_sphere_point(&self, l: &Vec3) -> Vec3 {
        let s = Vec3::new(l.x / l.z, l.y / l.z, 0.0);
        self.from_std.apply_sphere(&(s / s.norm()))
    }

    /// The point with Poincare coordinate `w` in the normalized disk.
    pub fn point_from_poincare(&self, w: num_complex::Complex64) -> Result<HPoint> {
        HPoint::from_poincare(w).ok_or(HyperbolicError::PointOnBoundary)
    }

    /// The oriented line carried by a circle orthogonal to the boundary;
    /// its left half-plane is the part of the carrier's companion disk
    /// inside the model.
    pub fn line(&self, carrier: &OrientedCircle, tol: f64) -> Result<OrientedLine> {
        let d = inv_dist(carrier, &self.boundary);
        if d.abs() > tol {
            return Err(HyperbolicError::NotOrthogonal(d));
        }
        let y = self.lorentz * carrier.lorentz();
        let line = HLine::from_normal(Vec3::new(y.x, y.y, y.w)).ok_or(HyperbolicError::NotOrthogonal(d))?;
        Ok(OrientedLine { carrier: *carrier, line })
    }

    /// The oriented line for a hyperboloid line.
    pub fn line_of(&self, line: &HLine) -> OrientedLine {
        let y = Vec4::new(line.n.x, line.n.y, 0.0, line.n.z);
        let carrier = OrientedCircle::from_lorentz(self.lorentz_inv * y).expect("Lorentz maps preserve space-like vectors");
        OrientedLine { carrier, line: *line }
    }

    /// The line from `a` toward `b`.
    pub fn line_through(&self, a: &HPoint, b: &HPoint) -> Result<OrientedLine> {
        let l = HLine::through(a, b).ok_or(HyperbolicError::DegenerateInput("coincident points".into()))?;
        Ok(self.line_of(&l))
    }

    pub fn distance(&self, p: &Vec3, q: &Vec3) -> Result<f64> {
        Ok(self.point(p)?.distance(&self.point(q)?))
    }

    /// Hyperbolic translation by signed length `t` along `l`, as a Moebius
    /// map of the sphere preserving the disk.
    pub fn translate_along_line(&self, l: &OrientedLine, t: f64) -> MoebiusMap {
        if t == 0.0 {
            return MoebiusMap::identity();
        }
        let [e0, e1] = l.line.ideal_ends();
        let b = l.line.base();
        let moved = b.exp(&l.line.tangent_at(&b), t);
        let ends = [self.ideal_sphere_point(&e0), self.ideal_sphere_point(&e1)];
        MoebiusMap::from_sphere_points(
            [ends[0], ends[1], self.sphere_point(&b)],
            [ends[0], ends[1], self.sphere_point(&moved)],
        )
        .expect("distinct points of the closed disk")
    }
}

/// Complex angle from `l1` to `l2`: the cosine is the inversive distance
/// of the carriers.
pub fn complex_angle(l1: &OrientedLine, l2: &OrientedLine) -> ComplexAngle {
    acos_theta(inv_dist(&l1.carrier, &l2.carrier))
}

/// Distance of two sphere points inside the companion disk of `model`.
pub fn hyp_distance(model: &DiskModel, p: &Vec3, q: &Vec3) -> Result<f64> {
    model.distance(p, q)
}

/// The common perpendicular of two ultra-parallel lines, as its feet on
/// `l1` and `l2`.
pub fn common_perpendicular(l1: &OrientedLine, l2: &OrientedLine, tol: f64) -> Result<(HPoint, HPoint)> {
    let c = mink(&l1.line.n, &l2.line.n).abs();
    if (c - 1.0).abs() <= tol * (1.0 + c) {
        return Err(HyperbolicError::LinesParallel);
    }
    if c < 1.0 {
        return Err(HyperbolicError::LinesIntersect);
    }
    perpendicular_feet(&l1.line, &l2.line).ok_or(HyperbolicError::LinesParallel)
}
