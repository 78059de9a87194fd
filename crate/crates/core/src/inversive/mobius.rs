use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::Rng;

use super::circle::{cross_ratio_hom, Hermitian, Hom, OrientedCircle};
use super::{InversiveError, Result, Vec3, Vec4};

/// Point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> ExtComplex {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    /// Inverse stereographic projection.
    pub fn to_sphere(self) -> Vec3 {
        hom_to_sphere(self.to_hom())
    }

    /// Stereographic projection from the north pole.
    pub fn from_sphere(q: &Vec3) -> ExtComplex {
        ExtComplex::from_hom(sphere_to_hom(q))
    }

    pub(crate) fn to_hom(self) -> Hom {
        match self {
            ExtComplex::Finite(z) => Hom::finite(z),
            ExtComplex::Infinity => Hom::infinity(),
        }
    }

    pub(crate) fn from_hom(h: Hom) -> ExtComplex {
        if h.1 == Complex64::new(0.0, 0.0) {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(h.0 / h.1)
        }
    }
}

/// Homogeneous coordinates of a sphere point, picking the better
/// conditioned of the two equivalent forms.
pub(crate) fn sphere_to_hom(q: &Vec3) -> Hom {
    if q.z > 0.0 {
        Hom(Complex64::new(1.0 + q.z, 0.0), Complex64::new(q.x, -q.y))
    } else {
        Hom(Complex64::new(q.x, q.y), Complex64::new(1.0 - q.z, 0.0))
    }
}

pub(crate) fn hom_to_sphere(h: Hom) -> Vec3 {
    let (u, v) = (h.0, h.1);
    let uv = u * v.conj();
    let nu = u.norm_sqr();
    let nv = v.norm_sqr();
    let s = nu + nv;
    Vec3::new(2.0 * uv.re / s, 2.0 * uv.im / s, (nu - nv) / s)
}

/// Cross ratio `(z1 - w1)(z2 - w2) / ((z1 - z2)(w1 - w2))`.
pub fn cross_ratio(z1: ExtComplex, z2: ExtComplex, w1: ExtComplex, w2: ExtComplex) -> Complex64 {
    cross_ratio_hom(z1.to_hom(), z2.to_hom(), w1.to_hom(), w2.to_hom())
}

/// Orientation-preserving Moebius map `z -> (az + b) / (cz + d)`, stored
/// with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<MoebiusMap> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-28 * scale * scale) || !det.norm().is_finite() {
            return Err(InversiveError::DegenerateTriple);
        }
        let s = det.sqrt();
        Ok(MoebiusMap { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> MoebiusMap {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MoebiusMap { a: one, b: zero, c: zero, d: one }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let m = self.matrix() * other.matrix();
        MoebiusMap::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]).expect("product of invertible maps")
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.a, self.b, self.c, self.d)
    }

    pub(crate) fn apply_hom(&self, h: Hom) -> Hom {
        Hom(self.a * h.0 + self.b * h.1, self.c * h.0 + self.d * h.1)
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        ExtComplex::from_hom(self.apply_hom(z.to_hom()))
    }

    pub fn apply_sphere(&self, q: &Vec3) -> Vec3 {
        hom_to_sphere(self.apply_hom(sphere_to_hom(q)))
    }

    /// Action on Lorentz space, `H -> N* H N` with `N` the inverse matrix.
    pub fn lorentz_matrix(&self) -> Matrix4<f64> {
        let n = self.inverse().matrix();
        let mut out = Matrix4::zeros();
        for k in 0..4 {
            let mut e = Vec4::zeros();
            e[k] = 1.0;
            let h = Hermitian::from_lorentz(&e);
            let hm = Matrix2::new(
                Complex64::new(h.a, 0.0),
                h.b,
                h.b.conj(),
                Complex64::new(h.c, 0.0),
            );
            let img = n.adjoint() * hm * n;
            let col = Hermitian { a: img[(0, 0)].re, b: img[(0, 1)], c: img[(1, 1)].re }.to_lorentz();
            out.set_column(k, &col);
        }
        out
    }

    /// Image circle; companion disks map to companion disks.
    pub fn apply_circle(&self, c: &OrientedCircle) -> OrientedCircle {
        let y = self.lorentz_matrix() * c.lorentz();
        OrientedCircle::from_lorentz(y).expect("Lorentz maps preserve space-like vectors")
    }

    /// Image circle rebuilt from three transported boundary points.
    pub fn apply_circle_three_point(&self, c: &OrientedCircle) -> Result<OrientedCircle> {
        let pts = c.sample(3);
        circle_through(&self.apply_sphere(&pts[0]), &self.apply_sphere(&pts[1]), &self.apply_sphere(&pts[2]))
    }

    /// The unique map with `src[i] -> dst[i]`.
    pub fn from_three_points(src: [ExtComplex; 3], dst: [ExtComplex; 3]) -> Result<MoebiusMap> {
        let s = to_standard(src.map(|z| z.to_hom()))?;
        let t = to_standard(dst.map(|z| z.to_hom()))?;
        Ok(t.inverse().compose(&s))
    }

    /// The unique map with `src[i] -> dst[i]` for sphere points.
    pub fn from_sphere_points(src: [Vec3; 3], dst: [Vec3; 3]) -> Result<MoebiusMap> {
        let s = to_standard(src.map(|q| sphere_to_hom(&q)))?;
        let t = to_standard(dst.map(|q| sphere_to_hom(&q)))?;
        Ok(t.inverse().compose(&s))
    }

    /// A map sending `c` to the counterclockwise unit circle, so its
    /// companion disk becomes the unit disk.
    pub fn standardizing(c: &OrientedCircle) -> MoebiusMap {
        let pts = c.sample(3);
        let w = |k: f64| {
            let t = std::f64::consts::TAU * k / 3.0;
            Vec3::new(t.cos(), t.sin(), 0.0)
        };
        MoebiusMap::from_sphere_points([pts[0], pts[1], pts[2]], [w(0.0), w(1.0), w(2.0)])
            .expect("distinct points on a circle")
    }

    /// `min(|M - N|, |M + N|) / |N|` over normalized coefficient matrices.
    pub fn projective_distance(&self, other: &MoebiusMap) -> f64 {
        let a = self.matrix();
        let b = other.matrix();
        (a - b).norm().min((a + b).norm()) / b.norm()
    }

    /// Random map with coefficients uniform in the square `[-1, 1]^2` and
    /// determinant bounded away from zero.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> MoebiusMap {
        loop {
            let mut z = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let (a, b, c, d) = (z(), z(), z(), z());
            if (a * d - b * c).norm() > 0.2 {
                return MoebiusMap::new(a, b, c, d).expect("checked determinant");
            }
        }
    }

    /// Conjugate `A T A` by the antipodal map `A(z) = -1 / conj(z)`.
    pub fn antipodal_conjugate(&self) -> MoebiusMap {
        MoebiusMap { a: -self.d.conj(), b: self.c.conj(), c: self.b.conj(), d: -self.a.conj() }
    }

    /// Coefficients as `[re, im]` pairs in the order a, b, c, d.
    pub fn coefficients(&self) -> [[f64; 2]; 4] {
        [self.a, self.b, self.c, self.d].map(|z| [z.re, z.im])
    }
}

/// Map sending the triple to `0, 1, infinity`.
fn to_standard(p: [Hom; 3]) -> Result<MoebiusMap> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let scale = (p[i].0.norm_sqr() + p[i].1.norm_sqr()).sqrt() * (p[j].0.norm_sqr() + p[j].1.norm_sqr()).sqrt();
        if p[i].det(&p[j]).norm() <= 1e-14 * scale {
            return Err(InversiveError::DegenerateTriple);
        }
    }
    let k1 = p[1].det(&p[2]);
    let k3 = p[1].det(&p[0]);
    MoebiusMap::new(p[0].1 * k1, -p[0].0 * k1, p[2].1 * k3, -p[2].0 * k3)
}

/// Oriented circle through three sphere points, traversed in the given order.
pub fn circle_through(q1: &Vec3, q2: &Vec3, q3: &Vec3) -> Result<OrientedCircle> {
    let n = (q2 - q1).cross(&(q3 - q1));
    if n.norm() <= 1e-14 {
        return Err(InversiveError::DegenerateTriple);
    }
    let c = n.dot(q1);
    OrientedCircle::from_lorentz(-Vec4::new(n.x, n.y, n.z, c))
}

/// Random point uniform on the sphere.
pub fn random_sphere_point<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Random oriented circle with a uniform center and radius in `[lo, hi]`.
pub fn random_circle<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> OrientedCircle {
    let p = random_sphere_point(rng);
    OrientedCircle::from_cap(&super::SphericalCap { center: p, radius: rng.random_range(lo..hi) })
}
