use serde::Serialize;

use super::framework::{complex_dihedral, CPolyhedron};
use super::{CpolyError, Result};
use crate::hyperbolic::{
    black_edge_deviation, compatible, four_vertex_labels, greenblack_from_hyperideal, hyp_distance, intersection, is_proper_hyperideal, lcross,
    Color, ComplexAngle, DiskModel, ElementRef, FourVertexReport, GreenBlackPolygon, HLine, OrientedLine, Properness,
};
use crate::inversive::{close, coaxial_family, inv_dist, OrientedCircle, Vec3};

/// Light-like vector of a boundary point of the model.
fn light_vector(model: &DiskModel, q: &Vec3) -> Vec3 {
    let s = model.normalization().apply_sphere(q);
    let r = s.x.hypot(s.y);
    Vec3::new(s.x / r, s.y / r, 1.0)
}

/// The point `p_u` of the disk of `cv` attached to the neighbor circle `cu`
/// and a circle `o` orthogonal to both. For disjoint `cu`, `cv` it is the
/// limit point of their pencil inside the disk; for crossing ones it is
/// where `o` meets the line of the disk joining the two crossing points.
pub fn link_point(cu: &OrientedCircle, cv: &OrientedCircle, o: &OrientedCircle, tol: f64) -> Result<Vec3> {
    let d = inv_dist(cu, cv);
    if close(d.abs(), 1.0, tol) {
        return Err(CpolyError::TangentPair);
    }
    let fam = coaxial_family(cu, cv, tol)?;
    if d.abs() > 1.0 {
        let p = fam.points.iter().max_by(|a, b| cv.power(a).total_cmp(&cv.power(b))).ok_or(CpolyError::FocusNotInDisk)?;
        if cv.power(p) <= tol {
            return Err(CpolyError::FocusNotInDisk);
        }
        return Ok(*p);
    }
    let model = DiskModel::new(*cv);
    let lambda = HLine::from_normal(lcross(&light_vector(&model, &fam.points[0]), &light_vector(&model, &fam.points[1])))
        .ok_or(CpolyError::TangentPair)?;
    let ol = model.line(o, tol)?;
    let x = intersection(&lambda, &ol.line).ok_or(CpolyError::FocusNotInDisk)?;
    Ok(model.sphere_point(&x))
}

/// What an element of a c-link comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkSource {
    /// A black edge lies on the line of this face.
    Face(usize),
    /// A green element sits between the two faces sharing this edge.
    Edge(usize, usize),
}

/// The c-link of a vertex circle: support lines cut by the incident faces
/// inside its companion disk and, when they bound a proper hyperideal
/// polygon, the resulting green-black polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct CLink {
    pub vertex: usize,
    /// Faces around the vertex in orientation order, starting at the
    /// smallest face index.
    pub faces: Vec<usize>,
    /// `neighbors[j]` spans the edge shared by `faces[j]` and `faces[j + 1]`.
    pub neighbors: Vec<usize>,
    pub model: DiskModel,
    pub lines: Vec<OrientedLine>,
    pub properness: Properness,
    pub polygon: Option<GreenBlackPolygon>,
}

impl CLink {
    pub fn is_proper(&self) -> bool {
        self.properness == Properness::Proper
    }

    /// The face or edge a polygon element comes from.
    pub fn source(&self, e: ElementRef) -> Option<LinkSource> {
        let p = self.polygon.as_ref()?;
        let n = self.faces.len();
        match e {
            ElementRef::Edge(i) => {
                let edge = p.edges.get(i)?;
                let s = edge.source?;
                Some(match edge.color {
                    Color::Black => LinkSource::Face(self.faces[s % n]),
                    Color::Green => LinkSource::Edge(self.vertex, self.neighbors[s % n]),
                })
            }
            ElementRef::Vertex(i) => {
                let s = p.vertices.get(i)?.source?;
                Some(LinkSource::Edge(self.vertex, self.neighbors[s % n]))
            }
        }
    }

    /// The polygon, or the improperness reason.
    pub fn require_polygon(&self) -> Result<&GreenBlackPolygon> {
        match (&self.polygon, self.properness) {
            (Some(p), _) => Ok(p),
            (None, Properness::Improper(reason)) => Err(CpolyError::NotProperAt { vertex: self.vertex, reason }),
            (None, Properness::Proper) => unreachable!("proper links carry a polygon"),
        }
    }
}

/// Orthogonality gate for the support lines at a vertex.
fn line_gate(cp: &CPolyhedron, f: usize) -> f64 {
    (cp.tol * cp.base.faces[f].len() as f64).max(cp.face_fit[f].residual * 2.0)
}

/// The c-link at vertex `v`. Improperness is reported in the result, not
/// as an error.
pub fn c_link(cp: &CPolyhedron, v: usize) -> Result<CLink> {
    if v >= cp.base.vertex_count() {
        return Err(CpolyError::UnknownVertex(v));
    }
    let star = cp.base.star(v);
    let faces: Vec<usize> = star.iter().map(|s| s.0).collect();
    let neighbors: Vec<usize> = star.iter().map(|s| s.1).collect();
    let model = DiskModel::new(cp.circles[v]);
    let lines = faces
        .iter()
        .map(|&f| model.line(&cp.face_ortho[f].reversed(), line_gate(cp, f)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let hlines: Vec<HLine> = lines.iter().map(|l| l.line).collect();
    let properness = is_proper_hyperideal(&hlines, cp.tol);
    let polygon = match properness {
        Properness::Proper => Some(greenblack_from_hyperideal(&hlines, cp.tol)?),
        Properness::Improper(_) => None,
    };
    Ok(CLink { vertex: v, faces, neighbors, model, lines, properness, polygon })
}

/// Agreement of a c-link with the link points and the complex dihedral
/// angles of its polyhedron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkIdentities {
    /// Largest gap between a black edge length and the distance of its link points.
    pub black_length: f64,
    /// Largest gap between a green element and the dihedral angle of its faces.
    pub dihedral: f64,
}

pub fn link_identities(cp: &CPolyhedron, link: &CLink) -> Result<LinkIdentities> {
    let p = link.require_polygon()?;
    let n = link.faces.len();
    let v = link.vertex;
    let cv = &cp.circles[v];
    let mut out = LinkIdentities { black_length: 0.0, dihedral: 0.0 };
    for e in &p.edges {
        let s = e.source.expect("cut polygons record sources");
        match e.color {
            Color::Black => {
                let f = link.faces[s];
                let o = &cp.face_ortho[f];
                let gate = line_gate(cp, f);
                let a = link_point(&cp.circles[link.neighbors[(s + n - 1) % n]], cv, o, gate)?;
                let b = link_point(&cp.circles[link.neighbors[s]], cv, o, gate)?;
                let d = hyp_distance(&link.model, &a, &b)?;
                out.black_length = out.black_length.max((d - e.length).abs());
            }
            Color::Green => {
                let want = complex_dihedral(cp, link.faces[s], link.faces[(s + 1) % n])?;
                out.dihedral = out.dihedral.max(ComplexAngle::imaginary(e.length).deviation(&want));
            }
        }
    }
    for x in p.vertices.iter().filter(|x| x.color == Color::Green) {
        let s = x.source.expect("cut polygons record sources");
        let want = complex_dihedral(cp, link.faces[s], link.faces[(s + 1) % n])?;
        out.dihedral = out.dihedral.max(ComplexAngle::real(x.angle).deviation(&want));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LinkComparison {
    /// All lengths and angles agree.
    Congruent { max_deviation: f64 },
    /// Black edges agree; green elements labeled by comparison.
    BlackEdgeCongruent { report: FourVertexReport, max_deviation: f64 },
    /// Same color pattern but some black edge differs.
    NotBlackEdgeCongruent { deviation: f64 },
    /// Different color patterns, or a link without a polygon.
    Incompatible,
}

/// Largest difference over all edge lengths and vertex angles.
pub fn polygon_deviation(a: &GreenBlackPolygon, b: &GreenBlackPolygon) -> f64 {
    let e = a.edges.iter().zip(&b.edges).map(|(x, y)| (x.length - y.length).abs());
    let v = a.vertices.iter().zip(&b.vertices).map(|(x, y)| (x.angle - y.angle).abs());
    e.chain(v).fold(0.0, f64::max)
}

pub fn compare_clinks(a: &CLink, b: &CLink, tol: f64) -> LinkComparison {
    let (Some(p), Some(q)) = (&a.polygon, &b.polygon) else {
        return LinkComparison::Incompatible;
    };
    if !compatible(p, q) {
        return LinkComparison::Incompatible;
    }
    let black = black_edge_deviation(p, q);
    if black > tol {
        return LinkComparison::NotBlackEdgeCongruent { deviation: black };
    }
    let max_deviation = polygon_deviation(p, q);
    if max_deviation <= tol {
        return LinkComparison::Congruent { max_deviation };
    }
    match four_vertex_labels(p, q, tol) {
        Ok(report) => LinkComparison::BlackEdgeCongruent { report, max_deviation },
        Err(_) => LinkComparison::Incompatible,
    }
}
