//! Convex polyhedra in the Klein model of hyperbolic 3-space whose
//! vertices lie beyond the sphere at infinity, and the circle polyhedra
//! their face planes cut on the sphere.

#[cfg(test)]
mod tests;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cpoly::{build_cpolyhedron, c_link, AbstractIssue, AbstractPolyhedron, CPolyhedron, CpolyError};
use crate::inversive::{random_sphere_point, OrientedCircle, SphericalCap, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Hyper3Error {
    #[error("invalid combinatorics: {0:?}")]
    InvalidPolyhedron(Vec<AbstractIssue>),
    #[error("not convex: {0}")]
    NotConvex(String),
    #[error("plane misses the open unit ball (offset {0})")]
    PlaneMissesBall(f64),
    #[error("vertex inside the closed unit ball (norm {0})")]
    VertexInsideBall(f64),
    #[error("not strictly hyperideal")]
    NotStrictlyHyperideal,
    #[error("edge {0}-{1} is tangent to the sphere")]
    Unitary(usize, usize),
    #[error("parameters out of range: {0}")]
    ParamsOutOfRange(String),
    #[error("no valid sample within {0} attempts")]
    RejectionBudgetExceeded(usize),
    #[error("dual construction: {0}")]
    Cpoly(#[from] CpolyError),
}

pub type Result<T> = std::result::Result<T, Hyper3Error>;

/// Distance from the origin to the segment `a b`.
fn segment_distance(a: &Vec3, b: &Vec3) -> f64 {
    let t = (-a.dot(&(b - a)) / (b - a).norm_squared()).clamp(0.0, 1.0);
    (a + (b - a) * t).norm()
}

/// Euclidean convex polyhedron with faces listed counterclockwise as seen
/// from outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexPolyhedron3 {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl ConvexPolyhedron3 {
    pub fn vertex(&self, i: usize) -> Vec3 {
        Vec3::from(self.vertices[i])
    }

    pub fn combinatorics(&self) -> AbstractPolyhedron {
        AbstractPolyhedron::from_faces(self.vertices.len(), self.faces.clone())
    }

    /// Outward unit normal `n` and offset `d` of the plane `x . n = d` of
    /// face `f`, from Newell's formula.
    pub fn face_plane(&self, f: usize) -> (Vec3, f64) {
        let face = &self.faces[f];
        let mut n = Vec3::zeros();
        let mut c = Vec3::zeros();
        for (i, &a) in face.iter().enumerate() {
            let p = self.vertex(a);
            let q = self.vertex(face[(i + 1) % face.len()]);
            n += p.cross(&q);
            c += p;
        }
        let n = n.normalize();
        (n, n.dot(&c) / face.len() as f64)
    }

    /// Combinatorics, face planarity and convexity with outward faces.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let issues = self.combinatorics().validate();
        if !issues.is_empty() {
            return Err(Hyper3Error::InvalidPolyhedron(issues));
        }
        for f in 0..self.faces.len() {
            let (n, d) = self.face_plane(f);
            if !n.iter().all(|x| x.is_finite()) {
                return Err(Hyper3Error::NotConvex(format!("face {f} is degenerate")));
            }
            for &v in &self.faces[f] {
                if (self.vertex(v).dot(&n) - d).abs() > tol {
                    return Err(Hyper3Error::NotConvex(format!("face {f} is not planar")));
                }
            }
            for v in 0..self.vertices.len() {
                if self.vertex(v).dot(&n) > d + tol {
                    return Err(Hyper3Error::NotConvex(format!("vertex {v} is outside face {f}")));
                }
            }
        }
        Ok(())
    }

    /// Distance from the origin to the face polygon.
    pub fn face_distance(&self, f: usize) -> f64 {
        let (n, d) = self.face_plane(f);
        let q = n * d;
        let face = &self.faces[f];
        let k = face.len();
        let inside = (0..k).all(|i| {
            let (a, b) = (self.vertex(face[i]), self.vertex(face[(i + 1) % k]));
            (b - a).cross(&(q - a)).dot(&n) >= 0.0
        });
        if inside {
            return d.abs();
        }
        (0..k).map(|i| segment_distance(&self.vertex(face[i]), &self.vertex(face[(i + 1) % k]))).fold(f64::INFINITY, f64::min)
    }

    /// Distance from the origin to the line carrying edge `u v`.
    pub fn edge_distance(&self, u: usize, v: usize) -> f64 {
        let (p, q) = (self.vertex(u), self.vertex(v));
        p.cross(&(q - p)).norm() / (q - p).norm()
    }

    pub fn scaled(&self, s: f64) -> ConvexPolyhedron3 {
        ConvexPolyhedron3 { vertices: self.vertices.iter().map(|v| v.map(|x| x * s)).collect(), faces: self.faces.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRelation {
    MeetsOpenBall,
    Tangent,
    MissesClosedBall,
}

/// Which edges meet hyperbolic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRegime {
    /// No edge meets the closed ball.
    AllMiss,
    /// Every edge meets the open ball.
    AllMeet,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperidealClass {
    pub vertex_outside: Vec<bool>,
    pub face_meets_ball: Vec<bool>,
    pub edges: Vec<((usize, usize), EdgeRelation)>,
    pub strictly_hyperideal: bool,
    pub non_unitary: bool,
    pub regime: EdgeRegime,
}

/// Position of every vertex, face and edge relative to the unit ball.
/// Edges are judged by their carrying lines, whose contact with the sphere
/// decides whether the adjacent face circles cross.
pub fn classify_strictly_hyperideal(p: &ConvexPolyhedron3, tol: f64) -> Result<HyperidealClass> {
    p.validate(tol.max(1e-9))?;
    let vertex_outside: Vec<bool> = (0..p.vertices.len()).map(|v| p.vertex(v).norm() > 1.0 + tol).collect();
    let face_meets_ball: Vec<bool> = (0..p.faces.len()).map(|f| p.face_distance(f) < 1.0 - tol).collect();
    let edges: Vec<((usize, usize), EdgeRelation)> = p
        .combinatorics()
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let d = p.edge_distance(u, v);
            let rel = if (d - 1.0).abs() <= tol {
                EdgeRelation::Tangent
            } else if d < 1.0 {
                EdgeRelation::MeetsOpenBall
            } else {
                EdgeRelation::MissesClosedBall
            };
            ((u, v), rel)
        })
        .collect();
    let strictly_hyperideal = vertex_outside.iter().all(|&b| b) && face_meets_ball.iter().all(|&b| b);
    let non_unitary = edges.iter().all(|e| e.1 != EdgeRelation::Tangent);
    let regime = if edges.iter().all(|e| e.1 == EdgeRelation::MissesClosedBall) {
        EdgeRegime::AllMiss
    } else if edges.iter().all(|e| e.1 == EdgeRelation::MeetsOpenBall) {
        EdgeRegime::AllMeet
    } else {
        EdgeRegime::Mixed
    };
    Ok(HyperidealClass { vertex_outside, face_meets_ball, edges, strictly_hyperideal, non_unitary, regime })
}

/// The circle cut by the plane `x . n = d` (unit outward `n`), oriented so
/// its companion disk is the cap beyond the plane.
pub fn support_circle(n: &Vec3, d: f64) -> Result<OrientedCircle> {
    if !(d.abs() < 1.0) {
        return Err(Hyper3Error::PlaneMissesBall(d));
    }
    Ok(OrientedCircle::from_cap(&SphericalCap { center: n.normalize(), radius: d.acos() }))
}

/// The circle where the cone from `v` touches the sphere, i.e. the sphere
/// meets the polar plane `x . v = 1`.
pub fn tangency_circle(v: &Vec3, tol: f64) -> Result<OrientedCircle> {
    let r = v.norm();
    if r <= 1.0 + tol {
        return Err(Hyper3Error::VertexInsideBall(r));
    }
    Ok(OrientedCircle::from_cap(&SphericalCap { center: v / r, radius: (1.0 / r).acos() }))
}

/// The combinatorial dual: vertex `f` for each face, and for each vertex
/// the face listing the faces around it clockwise as seen from outside.
/// With this orientation the support circles are met in face order along
/// every oriented ortho-circle.
pub fn dual_combinatorics(p: &ConvexPolyhedron3) -> AbstractPolyhedron {
    let a = p.combinatorics();
    let faces = (0..p.vertices.len()).map(|v| a.star(v).into_iter().rev().map(|(f, _)| f).collect()).collect();
    AbstractPolyhedron::from_faces(p.faces.len(), faces)
}

/// The circle polyhedron of a strictly hyperideal, non-unitary polyhedron:
/// a support circle per face on the dual combinatorics.
pub fn dual_cpolyhedron(p: &ConvexPolyhedron3, tol: f64) -> Result<CPolyhedron> {
    let class = classify_strictly_hyperideal(p, tol)?;
    if !class.strictly_hyperideal {
        return Err(Hyper3Error::NotStrictlyHyperideal);
    }
    if let Some(((u, v), _)) = class.edges.iter().find(|e| e.1 == EdgeRelation::Tangent) {
        return Err(Hyper3Error::Unitary(*u, *v));
    }
    let circles = (0..p.faces.len())
        .map(|f| {
            let (n, d) = p.face_plane(f);
            support_circle(&n, d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(build_cpolyhedron(dual_combinatorics(p), circles, tol)?)
}

/// Largest disagreement between the face ortho-circles of the dual and the
/// tangency circles of the corresponding vertices, as unoriented circles.
pub fn tangency_agreement(p: &ConvexPolyhedron3, cp: &CPolyhedron, tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for v in 0..p.vertices.len() {
        let t = tangency_circle(&p.vertex(v), tol)?.lorentz();
        let o = cp.face_ortho[v].lorentz();
        worst = worst.max((t - o).norm().min((t + o).norm()));
    }
    Ok(worst)
}

/// Convex hull of points in general position or with coplanar faces; faces
/// counterclockwise from outside. Points not on the hull are dropped.
pub fn convex_hull(points: &[Vec3], eps: f64) -> Result<ConvexPolyhedron3> {
    let n = points.len();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut planes = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = (points[j] - points[i]).cross(&(points[k] - points[i]));
                if nrm.norm() < eps {
                    continue;
                }
                let nrm = nrm.normalize();
                let d = nrm.dot(&points[i]);
                let side: Vec<f64> = points.iter().map(|q| nrm.dot(q) - d).collect();
                let (nrm, d, side) = if side.iter().all(|&s| s <= eps) {
                    (nrm, d, side)
                } else if side.iter().all(|&s| s >= -eps) {
                    (-nrm, -d, side.iter().map(|s| -s).collect())
                } else {
                    continue;
                };
                let on: Vec<usize> = (0..n).filter(|&m| side[m].abs() <= eps).collect();
                if faces.insert(on.clone()) {
                    planes.push((on, nrm, d));
                }
            }
        }
    }
    if planes.len() < 4 {
        return Err(Hyper3Error::NotConvex("points are coplanar".into()));
    }
    let used: BTreeSet<usize> = planes.iter().flat_map(|p| p.0.iter().copied()).collect();
    let index: Vec<Option<usize>> = (0..n).map(|i| used.iter().position(|&u| u == i)).collect();
    let mut out_faces = Vec::new();
    for (on, nrm, _) in &planes {
        let c: Vec3 = on.iter().map(|&m| points[m]).sum::<Vec3>() / on.len() as f64;
        let e1 = (points[on[0]] - c).normalize();
        let e2 = nrm.cross(&e1);
        let mut ring = on.clone();
        ring.sort_by(|&a, &b| {
            let ang = |m: usize| (points[m] - c).dot(&e2).atan2((points[m] - c).dot(&e1));
            ang(a).total_cmp(&ang(b))
        });
        out_faces.push(ring.into_iter().map(|m| index[m].unwrap()).collect());
    }
    let vertices = used.iter().map(|&i| [points[i].x, points[i].y, points[i].z]).collect();
    Ok(ConvexPolyhedron3 { vertices, faces: out_faces })
}

/// Fixture families with their size parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Fixture {
    /// Cube `[-a, a]^3`, valid for `a` in `(1/sqrt 3, 1)` except `1/sqrt 2`.
    Cube { a: f64 },
    /// Octahedron with vertices at distance `s`, valid for `s` in `(1, sqrt 3)` except `sqrt 2`.
    Octahedron { s: f64 },
    /// Regular dodecahedron with circumradius `r`.
    Dodecahedron { r: f64 },
    /// Regular icosahedron with circumradius `r`.
    Icosahedron { r: f64 },
    /// Hull of random points outside the ball.
    RandomHull { points: usize },
}

impl Fixture {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Fixture::Cube { .. } => "cube",
            Fixture::Octahedron { .. } => "octahedron",
            Fixture::Dodecahedron { .. } => "dodecahedron",
            Fixture::Icosahedron { .. } => "icosahedron",
            Fixture::RandomHull { .. } => "random_hull",
        }
    }
}

const PHI: f64 = 1.618_033_988_749_895;
const RANDOM_HULL_BUDGET: usize = 10_000;

fn signs3(x: [f64; 3]) -> Vec<Vec3> {
    let mut out = Vec::new();
    for s in 0..8 {
        let f = |k: usize| if s >> k & 1 == 1 { -1.0 } else { 1.0 };
        let v = Vec3::new(x[0] * f(0), x[1] * f(1), x[2] * f(2));
        if !out.iter().any(|w: &Vec3| (w - v).norm() < 1e-12) {
            out.push(v);
        }
    }
    out
}

fn cyclic(x: [f64; 3]) -> Vec<Vec3> {
    [[x[0], x[1], x[2]], [x[1], x[2], x[0]], [x[2], x[0], x[1]]].into_iter().flat_map(signs3).collect()
}

fn unit_platonic(kind: &Fixture) -> Vec<Vec3> {
    let pts = match kind {
        Fixture::Cube { .. } => signs3([1.0, 1.0, 1.0]),
        Fixture::Octahedron { .. } => cyclic([1.0, 0.0, 0.0]),
        Fixture::Dodecahedron { .. } => {
            let mut p = signs3([1.0, 1.0, 1.0]);
            p.extend(cyclic([0.0, 1.0 / PHI, PHI]));
            p
        }
        _ => cyclic([0.0, 1.0, PHI]),
    };
    let r = pts[0].norm();
    pts.into_iter().map(|p| p / r).collect()
}

/// A classified fixture; the parameter must leave the polyhedron strictly
/// hyperideal and non-unitary.
pub fn generate_fixture(kind: &Fixture, seed: u64, tol: f64) -> Result<ConvexPolyhedron3> {
    let check = |p: ConvexPolyhedron3| -> Result<ConvexPolyhedron3> {
        let c = classify_strictly_hyperideal(&p, tol)?;
        if !c.strictly_hyperideal || !c.non_unitary {
            return Err(Hyper3Error::ParamsOutOfRange(format!("{kind:?} is not strictly hyperideal and non-unitary")));
        }
        Ok(p)
    };
    match *kind {
        Fixture::Cube { a } => {
            let p = convex_hull(&unit_platonic(kind), 1e-9)?.scaled(a * 3f64.sqrt());
            check(p)
        }
        Fixture::Octahedron { s: r } | Fixture::Dodecahedron { r } | Fixture::Icosahedron { r } => {
            check(convex_hull(&unit_platonic(kind), 1e-9)?.scaled(r))
        }
        Fixture::RandomHull { points } => {
            if points < 4 {
                return Err(Hyper3Error::ParamsOutOfRange("a hull needs at least 4 points".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..RANDOM_HULL_BUDGET {
                let pts: Vec<Vec3> = (0..points).map(|_| random_sphere_point(&mut rng) * rng.random_range(1.05..1.6)).collect();
                let Ok(p) = convex_hull(&pts, 1e-9) else { continue };
                if p.vertices.len() != points || !well_inside_window(&p) {
                    continue;
                }
                return check(p);
            }
            Err(Hyper3Error::RejectionBudgetExceeded(RANDOM_HULL_BUDGET))
        }
    }
}

/// A random hull whose dual has a proper c-link at every vertex, and the
/// number of improper samples skipped on the way.
pub fn proper_random_hull(points: usize, seed: u64, tol: f64) -> Result<(ConvexPolyhedron3, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for skipped in 0..RANDOM_HULL_BUDGET {
        let p = generate_fixture(&Fixture::RandomHull { points }, rng.random(), tol)?;
        let cp = dual_cpolyhedron(&p, tol)?;
        if (0..cp.base.vertex_count()).all(|v| c_link(&cp, v).is_ok_and(|l| l.is_proper())) {
            return Ok((p, skipped));
        }
    }
    Err(Hyper3Error::RejectionBudgetExceeded(RANDOM_HULL_BUDGET))
}

/// Margins of at least `1e-3` from every classification boundary, with
/// the origin inside.
fn well_inside_window(p: &ConvexPolyhedron3) -> bool {
    const M: f64 = 1e-3;
    let faces_ok = (0..p.faces.len()).all(|f| {
        p.face_plane(f).1 > M && p.face_distance(f) < 1.0 - M
    });
    let edges_ok = p.combinatorics().edges().iter().all(|&(u, v)| (p.edge_distance(u, v) - 1.0).abs() > M);
    faces_ok && edges_ok && p.vertices.iter().all(|v| Vec3::from(*v).norm() > 1.0 + M)
}
