use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::eta;
use super::{close, InversiveError, Result, Vec3, Vec4};

/// Spherical cap: the companion disk of a circle given by its spherical
/// center and radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    pub center: Vec3,
    pub radius: f64,
}

impl SphericalCap {
    /// Normalizes the center; rejects radii outside `(0, pi)`.
    pub fn new(center: Vec3, radius: f64) -> Result<SphericalCap> {
        let n = center.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(InversiveError::DegenerateCircle("zero cap center".into()));
        }
        if !(radius > 0.0 && radius < std::f64::consts::PI) {
            return Err(InversiveError::DegenerateCircle(format!("cap radius {radius} outside (0, pi)")));
        }
        Ok(SphericalCap { center: center / n, radius })
    }
}

/// Traversal sense of a planar boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Counterclockwise; companion disk on the left.
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn from_sign(s: f64) -> Orientation {
        if s >= 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    }
}

/// An oriented circle or line of the extended plane.
///
/// A line with unit direction `u` and offset `d` is the set
/// `{d i u + t u}`; with positive orientation it is traversed along `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanarCircle {
    Circle { center: Complex64, radius: f64, orientation: Orientation },
    Line { direction: Complex64, offset: f64, orientation: Orientation },
}

impl PlanarCircle {
    pub fn orientation(&self) -> Orientation {
        match *self {
            PlanarCircle::Circle { orientation, .. } | PlanarCircle::Line { orientation, .. } => orientation,
        }
    }

    pub fn reversed(&self) -> PlanarCircle {
        let flip = |o: Orientation| Orientation::from_sign(-o.sign());
        match *self {
            PlanarCircle::Circle { center, radius, orientation } => {
                PlanarCircle::Circle { center, radius, orientation: flip(orientation) }
            }
            PlanarCircle::Line { direction, offset, orientation } => {
                PlanarCircle::Line { direction, offset, orientation: flip(orientation) }
            }
        }
    }
}

/// Hermitian form `h(z) = A|z|^2 + conj(B) z + B conj(z) + C` of a circle;
/// the companion disk is `{h >= 0}` and `AC - |B|^2 = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian {
    pub a: f64,
    pub b: Complex64,
    pub c: f64,
}

impl Hermitian {
    pub fn from_lorentz(x: &Vec4) -> Hermitian {
        Hermitian { a: x.z - x.w, b: Complex64::new(x.x, x.y), c: -(x.z + x.w) }
    }

    pub fn to_lorentz(&self) -> Vec4 {
        Vec4::new(self.b.re, self.b.im, 0.5 * (self.a - self.c), -0.5 * (self.a + self.c))
    }

    /// `h` evaluated at the homogeneous point `[u : v]`.
    pub fn eval(&self, u: Complex64, v: Complex64) -> f64 {
        self.a * u.norm_sqr() + 2.0 * (self.b.conj() * u * v.conj()).re + self.c * v.norm_sqr()
    }
}

/// Oriented circle on the sphere as a space-like unit Lorentz vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedCircle {
    x: Vec4,
}

impl OrientedCircle {
    /// Normalizes a space-like vector.
    pub fn from_lorentz(v: Vec4) -> Result<OrientedCircle> {
        let n2 = eta(&v, &v);
        if !(n2.is_finite() && n2 > 0.0) || n2 <= 1e-24 * v.norm_squared() {
            return Err(InversiveError::DegenerateCircle("vector is not space-like".into()));
        }
        Ok(OrientedCircle { x: v / n2.sqrt() })
    }

    pub fn from_cap(cap: &SphericalCap) -> OrientedCircle {
        let s = cap.radius.sin();
        let p = cap.center / cap.center.norm();
        OrientedCircle { x: Vec4::new(p.x / s, p.y / s, p.z / s, cap.radius.cos() / s) }
    }

    pub fn from_planar(pc: &PlanarCircle) -> Result<OrientedCircle> {
        let h = match *pc {
            PlanarCircle::Circle { center, radius, orientation } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(InversiveError::DegenerateCircle(format!("planar radius {radius}")));
                }
                let s = orientation.sign() / radius;
                Hermitian { a: -s, b: center * s, c: s * (radius * radius - center.norm_sqr()) }
            }
            PlanarCircle::Line { direction, offset, orientation } => {
                let n = direction.norm();
                if !(n > 0.0 && n.is_finite()) {
                    return Err(InversiveError::DegenerateCircle("zero line direction".into()));
                }
                let u = direction / n;
                let s = orientation.sign();
                Hermitian { a: 0.0, b: Complex64::i() * u * s, c: -2.0 * s * offset }
            }
        };
        OrientedCircle::from_lorentz(h.to_lorentz())
    }

    pub fn from_hermitian(h: &Hermitian) -> Result<OrientedCircle> {
        OrientedCircle::from_lorentz(h.to_lorentz())
    }

    pub fn lorentz(&self) -> Vec4 {
        self.x
    }

    pub fn hermitian(&self) -> Hermitian {
        Hermitian::from_lorentz(&self.x)
    }

    pub fn to_cap(&self) -> SphericalCap {
        let s = Vec3::new(self.x.x, self.x.y, self.x.z);
        let n = s.norm();
        SphericalCap { center: s / n, radius: 1f64.atan2(self.x.w) }
    }

    /// Planar form in the stereographic chart. Circles through the north
    /// pole become lines; circles within `tol` of it are refused.
    pub fn to_planar(&self, tol: f64) -> Result<PlanarCircle> {
        let h = self.hermitian();
        let cap = self.to_cap();
        // Angular gap between the circle and the north pole.
        let gap = (cap.center.xy().norm().atan2(cap.center.z) - cap.radius).abs();
        let bn = h.b.norm();
        if gap <= 1e-13 && bn > 0.0 {
            return Ok(PlanarCircle::Line {
                direction: -Complex64::i() * h.b / bn,
                offset: -h.c / (2.0 * bn),
                orientation: Orientation::Positive,
            });
        }
        if gap < tol {
            return Err(InversiveError::NearPoleDegeneracy);
        }
        Ok(PlanarCircle::Circle {
            center: -h.b / h.a,
            radius: 1.0 / h.a.abs(),
            orientation: if h.a < 0.0 { Orientation::Positive } else { Orientation::Negative },
        })
    }

    pub fn reversed(&self) -> OrientedCircle {
        OrientedCircle { x: -self.x }
    }

    /// `eta(x, (q, 1))`: positive inside the companion disk, zero on the circle.
    pub fn power(&self, q: &Vec3) -> f64 {
        self.x.x * q.x + self.x.y * q.y + self.x.z * q.z - self.x.w
    }

    /// Whether `q` lies in the closed companion disk.
    pub fn contains(&self, q: &Vec3) -> bool {
        self.power(q) >= 0.0
    }

    /// Orthonormal frame `(e1, e2)` of the circle's plane such that
    /// `center + cos(t) e1 + sin(t) e2`-style traversal with increasing `t`
    /// follows the orientation.
    fn frame(&self) -> (Vec3, f64, f64, Vec3, Vec3) {
        let cap = self.to_cap();
        let p = cap.center;
        let helper = if p.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let e1 = (helper - p * p.dot(&helper)).normalize();
        let e2 = e1.cross(&p);
        (p, cap.radius.cos(), cap.radius.sin(), e1, e2)
    }

    /// Point at parameter `t` along the circle, in orientation order.
    pub fn point_at(&self, t: f64) -> Vec3 {
        let (p, c, s, e1, e2) = self.frame();
        p * c + (e1 * t.cos() + e2 * t.sin()) * s
    }

    /// `n` points along the circle in orientation order.
    pub fn sample(&self, n: usize) -> Vec<Vec3> {
        let (p, c, s, e1, e2) = self.frame();
        (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                p * c + (e1 * t.cos() + e2 * t.sin()) * s
            })
            .collect()
    }

    /// Oriented equality within `tol` on the unit Lorentz vectors, measured
    /// relative to their size.
    pub fn approx_eq(&self, other: &OrientedCircle, tol: f64) -> bool {
        circle_distance(self, other) <= tol
    }

    /// Same circle up to orientation.
    pub fn approx_eq_unoriented(&self, other: &OrientedCircle, tol: f64) -> bool {
        circle_distance(self, other).min(circle_distance(self, &other.reversed())) <= tol
    }
}

/// Discrepancy of two oriented circles: angle between cap centers plus the
/// radius difference.
pub fn circle_distance(a: &OrientedCircle, b: &OrientedCircle) -> f64 {
    let ca = a.to_cap();
    let cb = b.to_cap();
    let cross = ca.center.cross(&cb.center).norm();
    let dot = ca.center.dot(&cb.center);
    cross.atan2(dot) + (ca.radius - cb.radius).abs()
}

/// Inversive distance from spherical centers and radii:
/// `(-p1.p2 + cos r1 cos r2) / (sin r1 sin r2)`.
pub fn inv_dist_spherical(c1: &SphericalCap, c2: &SphericalCap) -> f64 {
    (-c1.center.dot(&c2.center) + c1.radius.cos() * c2.radius.cos()) / (c1.radius.sin() * c2.radius.sin())
}

/// Inversive distance of unit Lorentz vectors.
#[inline]
pub fn inv_dist(c1: &OrientedCircle, c2: &OrientedCircle) -> f64 {
    -eta(&c1.x, &c2.x)
}

/// Homogeneous point `[u : v]` of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Hom(pub Complex64, pub Complex64);

impl Hom {
    pub fn finite(z: Complex64) -> Hom {
        Hom(z, Complex64::new(1.0, 0.0))
    }

    pub fn infinity() -> Hom {
        Hom(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn det(&self, o: &Hom) -> Complex64 {
        self.0 * o.1 - self.1 * o.0
    }
}

/// Cross ratio `(z1 - w1)(z2 - w2) / ((z1 - z2)(w1 - w2))` of homogeneous points.
pub(crate) fn cross_ratio_hom(z1: Hom, z2: Hom, w1: Hom, w2: Hom) -> Complex64 {
    z1.det(&w1) * z2.det(&w2) / (z1.det(&z2) * w1.det(&w2))
}

/// Inversive distance `2 [z1, z2; w1, w2] - 1`, where a circle orthogonal
/// to both inputs meets `c1` at `z1, z2` and `c2` at `w1, w2`, ordered so
/// the oriented arc from `z1` to `z2` lies in the first companion disk and
/// the arc from `w1` to `w2` in the second.
pub fn inv_dist_crossratio(c1: &PlanarCircle, c2: &PlanarCircle) -> Result<f64> {
    use PlanarCircle::*;
    let i = Complex64::i();
    match (*c1, *c2) {
        (Circle { center: a, radius: ra, orientation: oa }, Circle { center: b, radius: rb, orientation: ob }) => {
            let gap = b - a;
            if gap.norm() <= 1e-15 * (1.0 + a.norm()) && (ra - rb).abs() <= 1e-15 * ra.max(rb) {
                return Err(InversiveError::DegeneratePair);
            }
            // The line through both centers is orthogonal to both circles.
            let u = if gap.norm() > 0.0 { gap / gap.norm() } else { Complex64::new(1.0, 0.0) };
            let (z1, z2) = (a - u * ra * oa.sign(), a + u * ra * oa.sign());
            let (w1, w2) = (b - u * rb * ob.sign(), b + u * rb * ob.sign());
            let cr = cross_ratio_hom(Hom::finite(z1), Hom::finite(z2), Hom::finite(w1), Hom::finite(w2));
            Ok(2.0 * cr.re - 1.0)
        }
        (Line { .. }, Circle { .. }) => inv_dist_crossratio(c2, c1),
        (Circle { center: a, radius: ra, orientation: oa }, Line { direction, offset, orientation }) => {
            let d = direction / direction.norm();
            // Perpendicular from the center to the line.
            let u = i * d;
            let foot = d * (d.conj() * a).re + i * d * offset;
            let (z1, z2) = (a - u * ra * oa.sign(), a + u * ra * oa.sign());
            let (w1, w2) = line_arc_in_disk(foot, u, d, orientation);
            let cr = cross_ratio_hom(Hom::finite(z1), Hom::finite(z2), w1, w2);
            Ok(2.0 * cr.re - 1.0)
        }
        (Line { direction: d1, offset: o1, orientation: s1 }, Line { direction: d2, offset: o2, orientation: s2 }) => {
            let d1 = d1 / d1.norm();
            let d2 = d2 / d2.norm();
            let cross = (d1.conj() * d2).im;
            if cross.abs() <= 1e-14 {
                let (o2, s2) = if (d1.conj() * d2).re > 0.0 { (o2, s2) } else { (-o2, Orientation::from_sign(-s2.sign())) };
                if (o1 - o2).abs() <= 1e-15 * (1.0 + o1.abs()) {
                    return Err(InversiveError::DegeneratePair);
                }
                // Parallel: the perpendicular line through the origin.
                let u = i * d1;
                let (z1, z2) = line_arc_in_disk(i * d1 * o1, u, d1, s1);
                let (w1, w2) = line_arc_in_disk(i * d1 * o2, u, d1, s2);
                let cr = cross_ratio_hom(z1, z2, w1, w2);
                return Ok(2.0 * cr.re - 1.0);
            }
            // Meeting lines: unit circle about the intersection point.
            let p = line_intersection(d1, o1, d2, o2);
            let a1 = d1 * s1.sign();
            let a2 = d2 * s2.sign();
            let cr = cross_ratio_hom(
                Hom::finite(p + a1),
                Hom::finite(p - a1),
                Hom::finite(p + a2),
                Hom::finite(p - a2),
            );
            Ok(2.0 * cr.re - 1.0)
        }
    }
}

/// Ordered ends of the part of the oriented line `{foot + t u}` lying in the
/// companion half-plane of a line with direction `d` crossing it at `foot`.
fn line_arc_in_disk(foot: Complex64, u: Complex64, d: Complex64, orientation: Orientation) -> (Hom, Hom) {
    let left = Complex64::i() * d * orientation.sign();
    if (u.conj() * left).re > 0.0 {
        (Hom::finite(foot), Hom::infinity())
    } else {
        (Hom::infinity(), Hom::finite(foot))
    }
}

fn line_intersection(d1: Complex64, o1: f64, d2: Complex64, o2: f64) -> Complex64 {
    // Solve Im(conj(d_k) z) = o_k.
    let (a11, a12) = (-d1.im, d1.re);
    let (a21, a22) = (-d2.im, d2.re);
    let det = a11 * a22 - a12 * a21;
    Complex64::new((o1 * a22 - a12 * o2) / det, (a11 * o2 - a21 * o1) / det)
}

/// Overlap regime of an oriented pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairTag {
    CoupledNested,
    CoupledEnclosing,
    Separated,
    Tangent,
    Orthogonal,
    OverlappingAcute,
    OverlappingObtuse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairClass {
    pub tag: PairTag,
    pub invdist: f64,
    pub uncoupled: bool,
    pub segregated: bool,
    pub separated: bool,
    pub deep_overlap: bool,
    pub non_unitary: bool,
}

/// Classifies an oriented pair by inversive distance and disk position.
pub fn classify_pair(c1: &OrientedCircle, c2: &OrientedCircle, tol: f64) -> PairClass {
    let d = inv_dist(c1, c2);
    // Companion disks can only be disjoint when r1 + r2 < pi.
    let cos_r = |x: &Vec4| x.w / Vec3::new(x.x, x.y, x.z).norm();
    let small = cos_r(&c1.x) + cos_r(&c2.x) > 0.0;
    let disjoint = d >= 1.0 && small;
    let tangent = close(d, 1.0, tol) || close(d, -1.0, tol);
    let tag = if tangent {
        PairTag::Tangent
    } else if d.abs() <= tol {
        PairTag::Orthogonal
    } else if d < -1.0 {
        PairTag::CoupledNested
    } else if d > 1.0 {
        if disjoint {
            PairTag::Separated
        } else {
            PairTag::CoupledEnclosing
        }
    } else if d > 0.0 {
        PairTag::OverlappingAcute
    } else {
        PairTag::OverlappingObtuse
    };
    let uncoupled = (d > -1.0 && d < 1.0) || disjoint;
    PairClass {
        tag,
        invdist: d,
        uncoupled,
        segregated: uncoupled && d >= -tol,
        separated: d > 1.0 && disjoint,
        deep_overlap: d < 0.0 && d > -1.0,
        non_unitary: !tangent,
    }
}
