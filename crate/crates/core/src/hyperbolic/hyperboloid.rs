use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::inversive::Vec3;

/// Minkowski form `a1 b1 + a2 b2 - a3 b3` on R^{2,1}.
#[inline]
pub fn mink(a: &Vec3, b: &Vec3) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

/// Lorentz cross product: `<lcross(a, b), c> = det(a, b, c)`.
#[inline]
pub fn lcross(a: &Vec3, b: &Vec3) -> Vec3 {
    let c = a.cross(b);
    Vec3::new(c.x, c.y, -c.z)
}

fn unit_spacelike(v: Vec3) -> Option<Vec3> {
    let n2 = mink(&v, &v);
    (n2 > 0.0 && n2.is_finite()).then(|| v / n2.sqrt())
}

/// Point of the hyperboloid `<X, X> = -1`, `X3 > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint(pub Vec3);

impl HPoint {
    pub fn origin() -> HPoint {
        HPoint(Vec3::new(0.0, 0.0, 1.0))
    }

    /// Normalizes a time-like vector, flipping it into the upper sheet.
    pub fn from_timelike(v: Vec3) -> Option<HPoint> {
        let n2 = -mink(&v, &v);
        if !(n2 > 0.0 && n2.is_finite()) {
            return None;
        }
        let x = v / n2.sqrt();
        Some(HPoint(if x.z < 0.0 { -x } else { x }))
    }

    pub fn from_poincare(w: Complex64) -> Option<HPoint> {
        let r2 = w.norm_sqr();
        if r2 >= 1.0 {
            return None;
        }
        let s = 1.0 - r2;
        Some(HPoint(Vec3::new(2.0 * w.re / s, 2.0 * w.im / s, (1.0 + r2) / s)))
    }

    pub fn poincare(&self) -> Complex64 {
        Complex64::new(self.0.x, self.0.y) / (1.0 + self.0.z)
    }

    pub fn klein(&self) -> [f64; 2] {
        [self.0.x / self.0.z, self.0.y / self.0.z]
    }

    pub fn distance(&self, other: &HPoint) -> f64 {
        let d = self.0 - other.0;
        let m = mink(&d, &d).max(0.0);
        2.0 * (0.5 * m.sqrt()).asinh()
    }

    /// Unit tangent at `self` pointing toward `other`.
    pub fn direction_to(&self, other: &HPoint) -> Option<Vec3> {
        unit_spacelike(other.0 + self.0 * mink(&self.0, &other.0))
    }

    /// Point at distance `s` along the unit tangent `t`.
    pub fn exp(&self, t: &Vec3, s: f64) -> HPoint {
        HPoint(self.0 * s.cosh() + t * s.sinh())
    }

    /// Geodesic interpolation, `t = 0` at `self` and `t = 1` at `other`.
    pub fn lerp(&self, other: &HPoint, t: f64) -> HPoint {
        match self.direction_to(other) {
            Some(dir) => self.exp(&dir, t * self.distance(other)),
            None => *self,
        }
    }

    /// Interior angle at `self` between the directions to `a` and `b`.
    pub fn angle(&self, a: &HPoint, b: &HPoint) -> f64 {
        match (self.direction_to(a), self.direction_to(b)) {
            (Some(u), Some(v)) => angle_between(self, &u, &v),
            _ => f64::NAN,
        }
    }

    /// Left-rotation of the unit tangent `t` by `phi`.
    pub fn rotate(&self, t: &Vec3, phi: f64) -> Vec3 {
        t * phi.cos() + lcross(&self.0, t) * phi.sin()
    }
}

/// Unsigned angle in `[0, pi]` between unit tangents at `x`.
pub fn angle_between(x: &HPoint, u: &Vec3, v: &Vec3) -> f64 {
    let cross = mink(&lcross(&x.0, u), v);
    cross.abs().atan2(mink(u, v))
}

/// Signed left turn from tangent `u` to tangent `v` at `x`, in `(-pi, pi]`.
pub fn signed_turn(x: &HPoint, u: &Vec3, v: &Vec3) -> f64 {
    mink(&lcross(&x.0, u), v).atan2(mink(u, v))
}

/// Oriented geodesic with unit normal `n`; its left half-plane is
/// `{X : <n, X> >= 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HLine {
    pub n: Vec3,
}

impl HLine {
    pub fn from_normal(n: Vec3) -> Option<HLine> {
        unit_spacelike(n).map(|n| HLine { n })
    }

    /// The line from `a` toward `b`.
    pub fn through(a: &HPoint, b: &HPoint) -> Option<HLine> {
        HLine::from_normal(lcross(&a.0, &b.0))
    }

    /// The line through `x` with unit tangent `t`.
    pub fn from_point_tangent(x: &HPoint, t: &Vec3) -> HLine {
        HLine { n: lcross(&x.0, t) }
    }

    pub fn reversed(&self) -> HLine {
        HLine { n: -self.n }
    }

    /// Signed distance, positive on the left.
    pub fn signed_distance(&self, x: &HPoint) -> f64 {
        mink(&self.n, &x.0).asinh()
    }

    pub fn foot(&self, x: &HPoint) -> HPoint {
        let h = mink(&self.n, &x.0);
        HPoint((x.0 - self.n * h) / (1.0 + h * h).sqrt())
    }

    /// Unit tangent along the orientation at a point of the line.
    pub fn tangent_at(&self, x: &HPoint) -> Vec3 {
        lcross(&self.n, &x.0)
    }

    /// Foot of the perpendicular from the origin, a canonical base point.
    pub fn base(&self) -> HPoint {
        self.foot(&HPoint::origin())
    }

    /// Arc-length coordinate of a point of the line, from `base()`.
    pub fn coordinate(&self, x: &HPoint) -> f64 {
        let b = self.base();
        mink(&x.0, &self.tangent_at(&b)).asinh()
    }

    pub fn point_at(&self, s: f64) -> HPoint {
        let b = self.base();
        b.exp(&self.tangent_at(&b), s)
    }

    /// Backward and forward ideal endpoints as light-like vectors.
    pub fn ideal_ends(&self) -> [Vec3; 2] {
        let b = self.base();
        let t = self.tangent_at(&b);
        [b.0 - t, b.0 + t]
    }

    pub fn contains_point(&self, x: &HPoint, tol: f64) -> bool {
        mink(&self.n, &x.0).abs() <= tol * (1.0 + x.0.z)
    }
}

/// Intersection point of two lines, if they cross.
pub fn intersection(a: &HLine, b: &HLine) -> Option<HPoint> {
    HPoint::from_timelike(lcross(&a.n, &b.n))
}

/// Feet on `a` and `b` of the common perpendicular of ultra-parallel lines.
pub fn perpendicular_feet(a: &HLine, b: &HLine) -> Option<(HPoint, HPoint)> {
    let m = unit_spacelike(lcross(&a.n, &b.n))?;
    Some((HPoint::from_timelike(lcross(&a.n, &m))?, HPoint::from_timelike(lcross(&b.n, &m))?))
}

/// Orientation-preserving isometry frame: columns are the position and two
/// orthonormal tangents (heading, left normal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame(pub Matrix3<f64>);

impl Frame {
    pub fn identity() -> Frame {
        Frame(Matrix3::identity())
    }

    pub fn position(&self) -> HPoint {
        HPoint(self.0.column(2).into_owned())
    }

    pub fn heading(&self) -> Vec3 {
        self.0.column(0).into_owned()
    }

    /// Move forward by `s` along the heading.
    pub fn advance(&self, s: f64) -> Frame {
        let (c, h) = (s.cosh(), s.sinh());
        Frame(self.0 * Matrix3::new(c, 0.0, h, 0.0, 1.0, 0.0, h, 0.0, c))
    }

    /// Turn left by `phi`.
    pub fn turn(&self, phi: f64) -> Frame {
        let (c, s) = (phi.cos(), phi.sin());
        Frame(self.0 * Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    /// Deviation from the identity in Lie-algebra coordinates
    /// (x-boost, y-boost, rotation); zero iff the frame closes up.
    pub fn closure_residual(&self) -> [f64; 3] {
        let m = &self.0;
        [m[(0, 2)], m[(1, 2)], 0.5 * (m[(1, 0)] - m[(0, 1)])]
    }
}
