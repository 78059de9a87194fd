use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::Serialize;

use super::{AbstractPolyhedron, CpolyError, Diagnostic, Result};
use crate::hyperbolic::{acos_theta, ComplexAngle, DiskModel};
use crate::inversive::{are_coaxial, classify_pair, inv_dist, ortho_circle_fit, InversiveError, MoebiusMap, OrientedCircle, OrthoFit, Vec4};

/// Edge label function: the prescribed inversive distance of each edge.
pub type EdgeLabels = BTreeMap<(usize, usize), f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationReport {
    pub realized: bool,
    /// `(u, v, expected, found)` for every edge off by more than the tolerance.
    pub mismatches: Vec<(usize, usize, f64, f64)>,
    /// Edges with no label.
    pub missing: Vec<(usize, usize)>,
}

/// The edge labels a circle assignment realizes.
pub fn edge_labels_of(base: &AbstractPolyhedron, circles: &[OrientedCircle]) -> EdgeLabels {
    base.edges().into_iter().map(|(u, v)| ((u, v), inv_dist(&circles[u], &circles[v]))).collect()
}

/// Whether `circles` realize `beta` on every edge of `base`.
pub fn realization_check(base: &AbstractPolyhedron, circles: &[OrientedCircle], beta: &EdgeLabels, tol: f64) -> RealizationReport {
    let mut mismatches = Vec::new();
    let mut missing = Vec::new();
    for (u, v) in base.edges() {
        match beta.get(&(u, v)).or_else(|| beta.get(&(v, u))) {
            Some(&b) => {
                let d = inv_dist(&circles[u], &circles[v]);
                if (d - b).abs() > tol {
                    mismatches.push((u, v, b, d));
                }
            }
            None => missing.push((u, v)),
        }
    }
    RealizationReport { realized: mismatches.is_empty() && missing.is_empty(), mismatches, missing }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Convexity {
    Convex,
    /// The worst circle of the better orientation of `face`.
    NotConvex { face: usize, circle: usize, invdist: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum OrientationCase {
    /// Circles are met in face order along every oriented ortho-circle.
    #[serde(rename = "case_i")]
    CaseI,
    /// Circles are met in reverse face order along every ortho-circle.
    #[serde(rename = "case_ii")]
    CaseII,
    /// Faces disagree, or the order along `face` is ambiguous.
    Inconsistent { face: usize },
}

/// A circle framework on an abstract spherical polyhedron with its face
/// ortho-circles. Checks that fail are recorded in `diagnostics` rather
/// than aborting, so near-miss inputs can still be compared.
#[derive(Debug, Clone, PartialEq)]
pub struct CPolyhedron {
    pub base: AbstractPolyhedron,
    pub circles: Vec<OrientedCircle>,
    pub tol: f64,
    /// Least-squares ortho-circle of each face, canonical sign.
    pub face_fit: Vec<OrthoFit>,
    /// Oriented ortho-circle `O_f+` of each face chosen by the convexity search.
    pub face_ortho: Vec<OrientedCircle>,
    pub convexity: Convexity,
    pub diagnostics: Vec<Diagnostic>,
}

/// Gate for the c-planarity residual of a face with `n` circles.
fn planar_gate(tol: f64, n: usize) -> f64 {
    tol * n as f64
}

impl CPolyhedron {
    /// Runs every check and records failures. Errors only when the input
    /// is malformed or some face has no ortho-circle at all.
    pub fn assemble(base: AbstractPolyhedron, circles: Vec<OrientedCircle>, tol: f64) -> Result<CPolyhedron> {
        let issues = base.validate();
        if !issues.is_empty() {
            return Err(CpolyError::InvalidPolyhedron(issues));
        }
        if circles.len() != base.vertex_count() {
            return Err(CpolyError::CircleCount { expected: base.vertex_count(), found: circles.len() });
        }
        let mut diagnostics = Vec::new();
        for (u, v) in base.edges() {
            let pc = classify_pair(&circles[u], &circles[v], tol);
            if !pc.non_unitary {
                diagnostics.push(Diagnostic::Unitary { u, v, invdist: pc.invdist });
            } else if !pc.uncoupled {
                diagnostics.push(Diagnostic::EdgeCoupled { u, v, invdist: pc.invdist });
            }
        }
        let mut face_fit = Vec::with_capacity(base.faces.len());
        for (f, face) in base.faces.iter().enumerate() {
            let cs: Vec<OrientedCircle> = face.iter().map(|&u| circles[u]).collect();
            let fit = match ortho_circle_fit(&cs, tol) {
                Ok(fit) => fit,
                Err(InversiveError::Coaxial) => return Err(CpolyError::Check(Diagnostic::FaceCoaxial { face: f })),
                Err(_) => return Err(CpolyError::Check(Diagnostic::FaceNotCPlanar { face: f, residual: None })),
            };
            if fit.residual > planar_gate(tol, face.len()) {
                diagnostics.push(Diagnostic::FaceNotCPlanar { face: f, residual: Some(fit.residual) });
            }
            if face.len() > 3 {
                let n = face.len();
                for i in 0..n {
                    let t = [circles[face[i]], circles[face[(i + 1) % n]], circles[face[(i + 2) % n]]];
                    if are_coaxial(&t, tol) {
                        diagnostics.push(Diagnostic::ThreeConsecutiveCoaxial { face: f, vertex: face[(i + 1) % n] });
                    }
                }
            }
            face_fit.push(fit);
        }
        let (face_ortho, convexity) = convexity_search(&base, &circles, &face_fit, tol);
        if let Convexity::NotConvex { face, circle, invdist } = convexity {
            diagnostics.push(Diagnostic::NotConvex { face, circle, invdist });
        }
        let mut cp = CPolyhedron { base, circles, tol, face_fit, face_ortho, convexity, diagnostics };
        if let OrientationCase::Inconsistent { face } = check_consistent_orientation(&cp) {
            if cp.is_convex() {
                cp.diagnostics.push(Diagnostic::InconsistentOrientation { face });
            }
        }
        Ok(cp)
    }

    pub fn is_convex(&self) -> bool {
        self.convexity == Convexity::Convex
    }

    /// Whether the edge and face checks all passed.
    pub fn is_built(&self) -> bool {
        !self.diagnostics.iter().any(|d| {
            matches!(
                d,
                Diagnostic::EdgeCoupled { .. }
                    | Diagnostic::Unitary { .. }
                    | Diagnostic::FaceCoaxial { .. }
                    | Diagnostic::FaceNotCPlanar { .. }
                    | Diagnostic::ThreeConsecutiveCoaxial { .. }
            )
        })
    }

    pub fn is_non_unitary(&self) -> bool {
        !self.diagnostics.iter().any(|d| matches!(d, Diagnostic::Unitary { .. }))
    }

    /// Image under a Moebius map, rebuilt from scratch.
    pub fn transformed(&self, t: &MoebiusMap) -> Result<CPolyhedron> {
        let circles = self.circles.iter().map(|c| t.apply_circle(c)).collect();
        CPolyhedron::assemble(self.base.clone(), circles, self.tol)
    }

    /// Image under the antipodal map followed by reversal of every circle.
    pub fn antipodal_reversed(&self) -> Result<CPolyhedron> {
        let circles = self.circles.iter().map(antipodal_reversed).collect();
        CPolyhedron::assemble(self.base.clone(), circles, self.tol)
    }

    /// Largest `|<O_f, C_u>|` over faces and their circles.
    pub fn planarity_residual(&self) -> f64 {
        self.face_fit.iter().map(|f| f.residual).fold(0.0, f64::max)
    }
}

/// Image of an oriented circle under the antipodal map. The map reverses
/// the orientation of the sphere, so the companion disk of the image is the
/// complement of the image disk: the cap `(p, r)` becomes `(p, pi - r)`.
pub fn antipodal(c: &OrientedCircle) -> OrientedCircle {
    let x = c.lorentz();
    OrientedCircle::from_lorentz(Vec4::new(x.x, x.y, x.z, -x.w)).expect("space-like")
}

/// Antipodal image followed by reversal, which carries companion disks to
/// their images: the cap `(p, r)` becomes `(-p, r)`.
pub fn antipodal_reversed(c: &OrientedCircle) -> OrientedCircle {
    let x = c.lorentz();
    OrientedCircle::from_lorentz(Vec4::new(-x.x, -x.y, -x.z, x.w)).expect("space-like")
}

/// Strict construction: every edge and face check must pass.
pub fn build_cpolyhedron(base: AbstractPolyhedron, circles: Vec<OrientedCircle>, tol: f64) -> Result<CPolyhedron> {
    let cp = CPolyhedron::assemble(base, circles, tol)?;
    if let Some(d) = cp.diagnostics.iter().find(|d| !matches!(d, Diagnostic::NotConvex { .. } | Diagnostic::InconsistentOrientation { .. })) {
        return Err(CpolyError::Check(d.clone()));
    }
    Ok(cp)
}

/// Per face, the orientation of the ortho-circle under which every circle
/// is segregated from it; on failure the orientation with the larger
/// minimum inversive distance is kept.
fn convexity_search(
    base: &AbstractPolyhedron,
    circles: &[OrientedCircle],
    fits: &[OrthoFit],
    tol: f64,
) -> (Vec<OrientedCircle>, Convexity) {
    let mut chosen = Vec::with_capacity(fits.len());
    let mut verdict = Convexity::Convex;
    for (f, fit) in fits.iter().enumerate() {
        let gate = planar_gate(tol, base.faces[f].len()).max(fit.residual * 2.0);
        let trial = |o: OrientedCircle| {
            let mut worst = (usize::MAX, f64::INFINITY);
            let mut ok = true;
            for (u, c) in circles.iter().enumerate() {
                let pc = classify_pair(c, &o, gate);
                if !pc.segregated {
                    ok = false;
                }
                let score = if pc.segregated { pc.invdist } else { pc.invdist.min(-1.0) - pc.invdist.abs() };
                if score < worst.1 {
                    worst = (u, score);
                }
            }
            (o, ok, worst)
        };
        let a = trial(fit.circle);
        let b = trial(fit.circle.reversed());
        let (o, ok, worst) = match (a.1, b.1) {
            (true, false) => a,
            (false, true) => b,
            _ if a.2 .1 >= b.2 .1 => a,
            _ => b,
        };
        if !ok && verdict == Convexity::Convex {
            verdict = Convexity::NotConvex { face: f, circle: worst.0, invdist: inv_dist(&circles[worst.0], &o) };
        }
        chosen.push(o);
    }
    (chosen, verdict)
}

/// Re-runs the convexity search on a built polyhedron.
pub fn check_convexity(cp: &CPolyhedron) -> Convexity {
    convexity_search(&cp.base, &cp.circles, &cp.face_fit, cp.tol).1
}

/// Positions of the face circles along the oriented ortho-circle, as the
/// angle of the midpoint of the arc each companion disk cuts from it after
/// normalizing the ortho-circle to the unit circle.
pub fn face_positions(cp: &CPolyhedron, f: usize) -> Result<Vec<f64>> {
    let model = DiskModel::new(cp.face_ortho[f]);
    let gate = planar_gate(cp.tol, cp.base.faces[f].len()).max(cp.face_fit[f].residual * 2.0);
    cp.base.faces[f]
        .iter()
        .map(|&u| {
            let l = model.line(&cp.circles[u], gate)?;
            Ok(l.line.n.y.atan2(l.line.n.x))
        })
        .collect()
}

/// `Some(true)` when the positions increase cyclically in face order,
/// `Some(false)` when they decrease, `None` otherwise or on near ties.
pub(super) fn cyclic_direction(pos: &[f64], tol: f64) -> Option<bool> {
    let n = pos.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| pos[a].total_cmp(&pos[b]));
    for k in 0..n {
        let gap = (pos[idx[(k + 1) % n]] - pos[idx[k]]).rem_euclid(TAU);
        if gap <= tol {
            return None;
        }
    }
    let step = |k: usize| (idx[(k + 1) % n] + n - idx[k]) % n;
    if (0..n).all(|k| step(k) == 1) {
        Some(true)
    } else if (0..n).all(|k| step(k) == n - 1) {
        Some(false)
    } else {
        None
    }
}

/// Direction in which each face's circles are met along its oriented
/// ortho-circle, compared with the face order.
pub fn check_consistent_orientation(cp: &CPolyhedron) -> OrientationCase {
    let mut case = None;
    for f in 0..cp.base.faces.len() {
        let dir = face_positions(cp, f).ok().and_then(|p| cyclic_direction(&p, 1e-9));
        match (dir, case) {
            (None, _) => return OrientationCase::Inconsistent { face: f },
            (Some(d), None) => case = Some(d),
            (Some(d), Some(c)) if d != c => return OrientationCase::Inconsistent { face: f },
            _ => {}
        }
    }
    match case {
        Some(true) => OrientationCase::CaseI,
        _ => OrientationCase::CaseII,
    }
}

/// The polyhedron in orientation case (i): unchanged if already there,
/// otherwise its antipodal image with every circle reversed.
pub fn normalize_orientation(cp: &CPolyhedron) -> Result<CPolyhedron> {
    match check_consistent_orientation(cp) {
        OrientationCase::CaseI => Ok(cp.clone()),
        OrientationCase::CaseII => {
            let out = cp.antipodal_reversed()?;
            if check_consistent_orientation(&out) == OrientationCase::CaseI {
                Ok(out)
            } else {
                Err(CpolyError::StillInconsistent)
            }
        }
        OrientationCase::Inconsistent { .. } => Err(CpolyError::StillInconsistent),
    }
}

/// `acos_theta <O_f+, O_g+>` for faces sharing an edge.
pub fn complex_dihedral(cp: &CPolyhedron, f: usize, g: usize) -> Result<ComplexAngle> {
    if f >= cp.base.faces.len() || g >= cp.base.faces.len() || cp.base.adjacent_faces(f, g).is_none() {
        return Err(CpolyError::NotAdjacent(f, g));
    }
    Ok(acos_theta(inv_dist(&cp.face_ortho[f], &cp.face_ortho[g])))
}
