//! Moebius congruence of circle polyhedra: face-wise congruence, edge sign
//! labels from dihedral comparison, the Cauchy sign-change scan and the
//! end-to-end certificate.


use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::cpoly::{
    c_link, check_consistent_orientation, compare_clinks, complex_dihedral, AbstractPolyhedron, CPolyhedron, CpolyError,
    LinkComparison, OrientationCase,
};
use crate::hyperbolic::{acos_theta, cyclic_sign_changes, ComplexAngle, Sign};
use crate::inversive::{
    classify_pair, coaxial_family, eta, inv_dist, ExtComplex, FamilyKind, InversiveError, MoebiusMap, OrientedCircle,
    Vec3, Vec4,
};

/// Residuals up to `CONGRUENCE_SLACK * tol` count as agreement.
pub const CONGRUENCE_SLACK: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RigidityError {
    #[error("validation missing: {0}")]
    ValidationMissing(String),
    #[error("the polyhedra have different base polyhedra")]
    BaseMismatch,
    #[error("face {0} has fewer than three usable anchor points")]
    DegenerateFace(usize),
    #[error("face {face} is not Moebius congruent (residual {residual})")]
    FaceMismatch { face: usize, residual: f64 },
    #[error("no labeled edge")]
    NoLabeledEdge,
    #[error("no vertex has at most two sign changes")]
    LemmaViolated,
    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Cpoly(#[from] CpolyError),
    #[error(transparent)]
    Inversive(#[from] InversiveError),
}

pub type Result<T> = std::result::Result<T, RigidityError>;

/// Distance between circles as Lorentz vectors, relative to the target.
pub fn circle_residual(x: &OrientedCircle, y: &OrientedCircle) -> f64 {
    let (a, b) = (x.lorentz(), y.lorentz());
    (a - b).norm() / (1.0 + b.norm())
}

/// The two points of `c ∩ o`, ordered so that the positive arc of `o` from
/// the first to the second lies in the companion disk of `c`.
fn ordered_crossings(c: &OrientedCircle, o: &OrientedCircle, tol: f64) -> Result<[Vec3; 2]> {
    let fam = coaxial_family(c, o, tol)?;
    if fam.kind != FamilyKind::Elliptic {
        return Err(InversiveError::DegeneratePair.into());
    }
    let to_std = MoebiusMap::standardizing(o);
    let angle = |q: &Vec3| match ExtComplex::from_sphere(&to_std.apply_sphere(q)) {
        ExtComplex::Finite(z) => z.arg(),
        ExtComplex::Infinity => 0.0,
    };
    let (p, q) = (fam.points[0], fam.points[1]);
    let (s, t) = (angle(&p), angle(&q));
    let mid = s + (t - s).rem_euclid(TAU) / 2.0;
    let m = to_std.inverse().apply_sphere(&ExtComplex::finite(mid.cos(), mid.sin()).to_sphere());
    Ok(if c.power(&m) > 0.0 { [p, q] } else { [q, p] })
}

/// Limit points of a separated or nested pair, the one deeper in the
/// companion disk of `cv` first.
fn ordered_limit_points(cu: &OrientedCircle, cv: &OrientedCircle, tol: f64) -> Option<[Vec3; 2]> {
    let fam = coaxial_family(cu, cv, tol).ok()?;
    if fam.kind != FamilyKind::Hyperbolic {
        return None;
    }
    let (p, q) = (fam.points[0], fam.points[1]);
    Some(if cv.power(&p) >= cv.power(&q) { [p, q] } else { [q, p] })
}

fn min_separation(pts: &[Vec3]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.min((pts[i] - pts[j]).norm());
        }
    }
    m
}

/// A Moebius map carrying one face of a circle polyhedron to the same face
/// of another.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceCongruence {
    pub face: usize,
    pub map: MoebiusMap,
    /// Largest circle residual over the face, including its ortho-circle.
    pub residual: f64,
}

fn same_base(a: &AbstractPolyhedron, b: &AbstractPolyhedron) -> bool {
    a.faces == b.faces && a.vertex_count() == b.vertex_count()
}

/// Anchor quadruples for face `f`: the crossings of consecutive circles
/// with the ortho-circle, and for separated pairs also their limit points.
fn anchor_sets(cp: &CPolyhedron, f: usize, tol: f64) -> Vec<[Vec3; 4]> {
    let face = &cp.base.faces[f];
    let o = &cp.face_ortho[f];
    let n = face.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (u, v) = (face[i], face[(i + 1) % n]);
        let (Ok(a), Ok(c)) = (ordered_crossings(&cp.circles[u], o, tol), ordered_crossings(&cp.circles[v], o, tol)) else {
            continue;
        };
        out.push([a[0], a[1], c[0], c[1]]);
        if let Some(l) = ordered_limit_points(&cp.circles[u], &cp.circles[v], tol) {
            out.push([a[0], a[1], l[0], l[1]]);
        }
    }
    out
}

/// The Moebius map taking face `f` of `cp` to face `f` of `cp_prime`,
/// built from three anchor points and verified on the fourth and on every
/// circle of the face.
pub fn face_congruence(cp: &CPolyhedron, cp_prime: &CPolyhedron, f: usize, tol: f64) -> Result<FaceCongruence> {
    if !same_base(&cp.base, &cp_prime.base) {
        return Err(RigidityError::BaseMismatch);
    }
    let src = anchor_sets(cp, f, tol);
    let dst = anchor_sets(cp_prime, f, tol);
    if src.is_empty() || src.len() != dst.len() {
        return Err(RigidityError::DegenerateFace(f));
    }
    let best = (0..src.len())
        .max_by(|&i, &j| {
            let q = |k: usize| min_separation(&src[k]).min(min_separation(&dst[k]));
            q(i).total_cmp(&q(j))
        })
        .unwrap();
    let (s, d) = (src[best], dst[best]);
    if min_separation(&s).min(min_separation(&d)) <= tol.sqrt() {
        return Err(RigidityError::DegenerateFace(f));
    }
    let map = MoebiusMap::from_sphere_points([s[0], s[1], s[2]], [d[0], d[1], d[2]])?;
    let mut residual = (map.apply_sphere(&s[3]) - d[3]).norm();
    for &u in &cp.base.faces[f] {
        residual = residual.max(circle_residual(&map.apply_circle(&cp.circles[u]), &cp_prime.circles[u]));
    }
    residual = residual.max(circle_residual(&map.apply_circle(&cp.face_ortho[f]), &cp_prime.face_ortho[f]));
    if residual > CONGRUENCE_SLACK * tol {
        return Err(RigidityError::FaceMismatch { face: f, residual });
    }
    Ok(FaceCongruence { face: f, map, residual })
}

/// Edge labels from comparing the complex dihedral angles of two circle
/// polyhedra on the same base.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeSignLabeling {
    pub labels: BTreeMap<(usize, usize), Sign>,
    /// Edges where one of the two ortho-circle pairs is tangent; labeled none.
    pub indeterminate: Vec<(usize, usize)>,
    /// Edges whose two dihedral angles lie on different branches.
    pub mixed_branch: Vec<(usize, usize)>,
}

impl EdgeSignLabeling {
    pub fn get(&self, u: usize, v: usize) -> Sign {
        self.labels.get(&(u.min(v), u.max(v))).copied().unwrap_or(Sign::None)
    }

    pub fn set(&mut self, u: usize, v: usize, s: Sign) {
        self.labels.insert((u.min(v), u.max(v)), s);
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.values().filter(|&&s| s != Sign::None).count()
    }

    pub fn negated(&self) -> EdgeSignLabeling {
        EdgeSignLabeling { labels: self.labels.iter().map(|(&e, s)| (e, s.negated())).collect(), ..self.clone() }
    }
}

impl Serialize for EdgeSignLabeling {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.labels.iter().map(|(&(u, v), sign)| (format!("{u}-{v}"), *sign)))
    }
}

/// Label for one edge from `d = <O_f+, O_g+>` and its primed counterpart.
/// When the primed ortho-circles meet, plus means the unprimed angle is
/// larger; otherwise plus means `d > d'`.
pub fn edge_label(d: f64, d_prime: f64, tol: f64) -> Sign {
    if (d - d_prime).abs() <= tol * (1.0 + d_prime.abs()) {
        return Sign::None;
    }
    let plus = if d_prime.abs() <= 1.0 { d < d_prime } else { d > d_prime };
    if plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub fn edge_labels(cp: &CPolyhedron, cp_prime: &CPolyhedron, tol: f64) -> Result<EdgeSignLabeling> {
    if !same_base(&cp.base, &cp_prime.base) {
        return Err(RigidityError::BaseMismatch);
    }
    let mut out = EdgeSignLabeling::default();
    for (u, v) in cp.base.edges() {
        let (f, g) = cp.base.edge_faces(u, v).ok_or(CpolyError::NotAdjacent(u, v))?;
        let d = inv_dist(&cp.face_ortho[f], &cp.face_ortho[g]);
        let dp = inv_dist(&cp_prime.face_ortho[f], &cp_prime.face_ortho[g]);
        let tangent = |x: f64| (x.abs() - 1.0).abs() <= tol;
        if tangent(d) || tangent(dp) {
            out.indeterminate.push((u, v));
            out.set(u, v, Sign::None);
            continue;
        }
        let s = edge_label(d, dp, CONGRUENCE_SLACK * tol);
        if s != Sign::None && acos_theta(d).branch != acos_theta(dp).branch {
            out.mixed_branch.push((u, v));
        }
        out.set(u, v, s);
    }
    Ok(out)
}

/// Sign changes met walking once around `v`, skipping unlabeled edges.
pub fn sign_changes_around(labels: &EdgeSignLabeling, p: &AbstractPolyhedron, v: usize) -> usize {
    let signs: Vec<Sign> = p.star(v).iter().map(|&(_, u)| labels.get(u, v)).collect();
    cyclic_sign_changes(&signs)
}

/// The smallest vertex on a labeled edge with at most two sign changes.
pub fn combinatorial_scan(labels: &EdgeSignLabeling, p: &AbstractPolyhedron) -> Result<usize> {
    if labels.labeled_count() == 0 {
        return Err(RigidityError::NoLabeledEdge);
    }
    (0..p.vertex_count())
        .find(|&v| p.star(v).iter().any(|&(_, u)| labels.get(u, v) != Sign::None) && sign_changes_around(labels, p, v) <= 2)
        .ok_or(RigidityError::LemmaViolated)
}

/// Random labeling of the edges of `p`, each edge plus, minus or none.
pub fn random_labeling<R: Rng + ?Sized>(rng: &mut R, p: &AbstractPolyhedron) -> EdgeSignLabeling {
    let mut out = EdgeSignLabeling::default();
    for (u, v) in p.edges() {
        let s = match rng.random_range(0..3) {
            0 => Sign::Plus,
            1 => Sign::Minus,
            _ => Sign::None,
        };
        out.set(u, v, s);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    FaceMismatch { face: usize, residual: f64 },
    DihedralMismatch { edge: (usize, usize), angle: ComplexAngle, angle_prime: ComplexAngle },
    CirclePropagation { circle: usize, residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CongruenceVerdict {
    Congruent { map: MoebiusMap, residual: f64 },
    NotCongruent { witness: Witness },
}

impl CongruenceVerdict {
    pub fn is_congruent(&self) -> bool {
        matches!(self, CongruenceVerdict::Congruent { .. })
    }
}

/// How far each hypothesis of the rigidity theorem is from failing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypothesisMargins {
    /// Smallest `||<C_u, C_v>| - 1|` over edges of both polyhedra.
    pub non_unitary: f64,
    /// Smallest `<C, O_f+>` over faces and circles off the face.
    pub convexity: f64,
    /// Largest face planarity residual.
    pub planarity: f64,
}

impl HypothesisMargins {
    fn of(cp: &CPolyhedron) -> HypothesisMargins {
        let non_unitary = cp
            .base
            .edges()
            .iter()
            .map(|&(u, v)| (inv_dist(&cp.circles[u], &cp.circles[v]).abs() - 1.0).abs())
            .fold(f64::INFINITY, f64::min);
        let mut convexity = f64::INFINITY;
        for (f, face) in cp.base.faces.iter().enumerate() {
            for (c, circle) in cp.circles.iter().enumerate() {
                if !face.contains(&c) {
                    convexity = convexity.min(inv_dist(circle, &cp.face_ortho[f]));
                }
            }
        }
        HypothesisMargins { non_unitary, convexity, planarity: cp.planarity_residual() }
    }

    fn min(self, o: HypothesisMargins) -> HypothesisMargins {
        HypothesisMargins {
            non_unitary: self.non_unitary.min(o.non_unitary),
            convexity: self.convexity.min(o.convexity),
            planarity: self.planarity.max(o.planarity),
        }
    }

    /// Name of the hypothesis closest to failing, planarity measured
    /// against the square root of the tolerance.
    pub fn weakest(&self, tol: f64) -> &'static str {
        let planarity = 1.0 - self.planarity / tol.sqrt();
        [("non_unitary", self.non_unitary), ("convexity", self.convexity), ("planarity", planarity)]
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceReport {
    pub verdict: CongruenceVerdict,
    pub face_residuals: Vec<Option<f64>>,
    pub dihedral_mismatches: Vec<Witness>,
    pub labels: EdgeSignLabeling,
    pub scan_vertex: Option<usize>,
    pub sign_changes: Option<usize>,
    pub link_comparison: Option<LinkComparison>,
    pub margins: HypothesisMargins,
    pub weakest_hypothesis: &'static str,
}

fn require_validated(cp: &CPolyhedron, side: &str) -> Result<()> {
    if !cp.is_built() {
        return Err(RigidityError::ValidationMissing(format!("{side}: not a circle polyhedron")));
    }
    if !cp.is_convex() {
        return Err(RigidityError::ValidationMissing(format!("{side}: not convex")));
    }
    if check_consistent_orientation(cp) != OrientationCase::CaseI {
        return Err(RigidityError::ValidationMissing(format!("{side}: not consistently oriented")));
    }
    for v in 0..cp.base.vertex_count() {
        if !c_link(cp, v)?.is_proper() {
            return Err(RigidityError::ValidationMissing(format!("{side}: improper at vertex {v}")));
        }
    }
    Ok(())
}

/// Decides whether a Moebius map carries `cp` onto `cp_prime`, and
/// explains the answer either way.
pub fn certify_congruence(cp: &CPolyhedron, cp_prime: &CPolyhedron, tol: f64) -> Result<CongruenceReport> {
    if !same_base(&cp.base, &cp_prime.base) {
        return Err(RigidityError::BaseMismatch);
    }
    require_validated(cp, "first")?;
    require_validated(cp_prime, "second")?;

    let mut faces = Vec::new();
    let mut face_witness = None;
    for f in 0..cp.base.faces.len() {
        match face_congruence(cp, cp_prime, f, tol) {
            Ok(fc) => faces.push(Some(fc)),
            Err(RigidityError::FaceMismatch { face, residual }) => {
                face_witness.get_or_insert(Witness::FaceMismatch { face, residual });
                faces.push(None);
            }
            Err(RigidityError::DegenerateFace(face)) => {
                face_witness.get_or_insert(Witness::FaceMismatch { face, residual: f64::INFINITY });
                faces.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let face_residuals = faces.iter().map(|f| f.as_ref().map(|f| f.residual)).collect();

    let mut dihedral_mismatches = Vec::new();
    for (u, v) in cp.base.edges() {
        let (f, g) = cp.base.edge_faces(u, v).ok_or(CpolyError::NotAdjacent(u, v))?;
        let a = complex_dihedral(cp, f, g)?;
        let b = complex_dihedral(cp_prime, f, g)?;
        if a.deviation(&b) > CONGRUENCE_SLACK * tol {
            dihedral_mismatches.push(Witness::DihedralMismatch { edge: (u, v), angle: a, angle_prime: b });
        }
    }

    let labels = edge_labels(cp, cp_prime, tol)?;
    let scan_vertex = combinatorial_scan(&labels, &cp.base).ok();
    let sign_changes = scan_vertex.map(|v| sign_changes_around(&labels, &cp.base, v));
    let link_comparison = match scan_vertex {
        Some(v) => Some(compare_clinks(&c_link(cp, v)?, &c_link(cp_prime, v)?, CONGRUENCE_SLACK * tol)),
        None => None,
    };
    let margins = HypothesisMargins::of(cp).min(HypothesisMargins::of(cp_prime));

    let verdict = if let Some(w) = face_witness {
        CongruenceVerdict::NotCongruent { witness: w }
    } else {
        let seed = faces[0].as_ref().expect("every face is congruent");
        let mut worst = (0, 0.0f64);
        for (i, c) in cp.circles.iter().enumerate() {
            let r = circle_residual(&seed.map.apply_circle(c), &cp_prime.circles[i]);
            if r > worst.1 {
                worst = (i, r);
            }
        }
        if worst.1 <= CONGRUENCE_SLACK * tol {
            CongruenceVerdict::Congruent { map: seed.map, residual: worst.1 }
        } else if let Some(w) = dihedral_mismatches.first() {
            CongruenceVerdict::NotCongruent { witness: w.clone() }
        } else {
            CongruenceVerdict::NotCongruent { witness: Witness::CirclePropagation { circle: worst.0, residual: worst.1 } }
        }
    };
    Ok(CongruenceReport {
        verdict,
        face_residuals,
        dihedral_mismatches,
        labels,
        scan_vertex,
        sign_changes,
        link_comparison,
        weakest_hypothesis: margins.weakest(tol),
        margins,
    })
}

/// Given oriented circles `O, A, B` in one elliptic or hyperbolic family
/// with `<O, A> = <O, B>`, and `C` orthogonal to `O` but not orthogonal to
/// `A`: returns whether `C` fails to be segregated from at least one of
/// `A` and `B`.
pub fn lemma_three_coaxial_check(
    o: &OrientedCircle,
    a: &OrientedCircle,
    b: &OrientedCircle,
    c: &OrientedCircle,
    tol: f64,
) -> Result<bool> {
    let violated = |m: &str| Err(RigidityError::HypothesisViolated(m.into()));
    let distinct = |x: &OrientedCircle, y: &OrientedCircle| !x.approx_eq_unoriented(y, tol.sqrt());
    if !(distinct(o, a) && distinct(o, b) && distinct(a, b)) {
        return violated("O, A, B are not pairwise distinct");
    }
    let fam = coaxial_family(o, a, tol)?;
    if fam.kind == FamilyKind::Parabolic {
        return violated("O and A span a parabolic family");
    }
    if !fam.contains(b, tol.sqrt()) {
        return violated("B is not coaxial with O and A");
    }
    if (inv_dist(o, a) - inv_dist(o, b)).abs() > tol.sqrt() * (1.0 + inv_dist(o, a).abs()) {
        return violated("<O, A> differs from <O, B>");
    }
    if inv_dist(o, c).abs() > tol.sqrt() {
        return violated("C is not orthogonal to O");
    }
    if inv_dist(c, a).abs() <= tol.sqrt() {
        return violated("C belongs to the family orthogonal to O and A");
    }
    Ok(!(classify_pair(c, a, tol).segregated && classify_pair(c, b, tol).segregated))
}

/// The circle `B` of the family of `O` and `A` with `<O, B> = <O, A>`.
pub fn coaxial_mirror(o: &OrientedCircle, a: &OrientedCircle) -> Result<OrientedCircle> {
    let (x, y) = (o.lorentz(), a.lorentz());
    Ok(OrientedCircle::from_lorentz(x * (2.0 * eta(&y, &x)) - y)?)
}

/// A random configuration satisfying the hypotheses of
/// [`lemma_three_coaxial_check`], and the number of rejected samples.
pub fn random_three_coaxial<R: Rng + ?Sized>(rng: &mut R, tol: f64) -> ([OrientedCircle; 4], usize) {
    let mut rejected = 0;
    loop {
        let o = crate::inversive::random_circle(rng, 0.2, 2.9);
        let a = crate::inversive::random_circle(rng, 0.2, 2.9);
        let x = crate::inversive::random_circle(rng, 0.2, 2.9).lorentz();
        let ox = o.lorentz();
        let cx: Vec4 = x - ox * eta(&x, &ox);
        let norm2 = eta(&cx, &cx);
        let built = if norm2 > 1e-6 {
            coaxial_mirror(&o, &a).ok().zip(OrientedCircle::from_lorentz(cx / norm2.sqrt()).ok())
        } else {
            None
        };
        if let Some((b, c)) = built {
            let d = inv_dist(&o, &a).abs();
            let ok = (d - 1.0).abs() > 1e-3
                && inv_dist(&c, &a).abs() > 1e-3
                && !o.approx_eq_unoriented(&a, 1e-3)
                && !a.approx_eq_unoriented(&b, 1e-3)
                && lemma_three_coaxial_check(&o, &a, &b, &c, tol).is_ok();
            if ok {
                return ([o, a, b, c], rejected);
            }
        }
        rejected += 1;
    }
}
