use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::angle::{acos_theta, ComplexAngle};
use super::hyperboloid::{intersection, mink, perpendicular_feet, Frame, HLine, HPoint};
use super::{HyperbolicError, Result};
use crate::inversive::close;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Green,
    Black,
}

/// Vertex of a green-black polygon with its interior angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbVertex {
    pub color: Color,
    pub angle: f64,
    pub position: Option<HPoint>,
    /// For polygons cut out by support lines: the junction `j` between
    /// lines `j` and `j + 1` that produced this vertex.
    pub source: Option<usize>,
}

/// Edge from vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbEdge {
    pub color: Color,
    pub length: f64,
    /// The support line of a black edge, or the junction of a green edge.
    pub source: Option<usize>,
}

/// Compact convex polygon with colored vertices and edges, listed
/// counterclockwise; edge `i` joins vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct GreenBlackPolygon {
    pub vertices: Vec<GbVertex>,
    pub edges: Vec<GbEdge>,
}

/// A vertex or edge of a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementRef {
    Vertex(usize),
    Edge(usize),
}

impl GreenBlackPolygon {
    /// Polygon from edge and angle data; positions are laid out from the
    /// origin with the first edge along the positive real axis.
    pub fn from_data(edges: &[(Color, f64)], vertices: &[(Color, f64)]) -> Result<GreenBlackPolygon> {
        if edges.len() != vertices.len() || edges.len() < 3 {
            return Err(HyperbolicError::DegenerateInput("a polygon needs n >= 3 vertices and n edges".into()));
        }
        let mut p = GreenBlackPolygon {
            vertices: vertices.iter().map(|&(color, angle)| GbVertex { color, angle, position: None, source: None }).collect(),
            edges: edges.iter().map(|&(color, length)| GbEdge { color, length, source: None }).collect(),
        };
        let pts = p.layout().0;
        for (v, x) in p.vertices.iter_mut().zip(pts) {
            v.position = Some(x);
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Turtle layout of the edge and angle data. Returns the vertices and
    /// the frame reached after walking once around, which is the identity
    /// exactly when the data closes up.
    pub fn layout(&self) -> (Vec<HPoint>, Frame) {
        let n = self.len();
        let mut f = Frame::identity();
        let mut pts = Vec::with_capacity(n);
        for i in 0..n {
            pts.push(f.position());
            f = f.advance(self.edges[i].length).turn(PI - self.vertices[(i + 1) % n].angle);
        }
        (pts, f)
    }

    /// Frobenius distance of the layout's closing frame from the identity.
    pub fn closure_error(&self) -> f64 {
        let f = self.layout().1;
        (f.0 - nalgebra::Matrix3::identity()).norm()
    }

    /// The green elements in walk order (vertex 0, edge 0, vertex 1, ...)
    /// with their complex angles: real for green vertices, imaginary (the
    /// length) for green edges.
    pub fn green_elements(&self) -> Vec<(ElementRef, ComplexAngle)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            if self.vertices[i].color == Color::Green {
                out.push((ElementRef::Vertex(i), ComplexAngle::real(self.vertices[i].angle)));
            }
            if self.edges[i].color == Color::Green {
                out.push((ElementRef::Edge(i), ComplexAngle::imaginary(self.edges[i].length)));
            }
        }
        out
    }

    pub fn green_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.color == Color::Green).count()
    }

    /// Color pattern in walk order.
    pub fn pattern(&self) -> Vec<Color> {
        self.vertices.iter().zip(&self.edges).flat_map(|(v, e)| [v.color, e.color]).collect()
    }

    /// The value compared by labels: angle for vertices, length for edges.
    pub fn measure(&self, e: ElementRef) -> f64 {
        match e {
            ElementRef::Vertex(i) => self.vertices[i].angle,
            ElementRef::Edge(i) => self.edges[i].length,
        }
    }

    /// Positions, falling back to the turtle layout.
    pub fn positions(&self) -> Vec<HPoint> {
        if self.vertices.iter().all(|v| v.position.is_some()) {
            self.vertices.iter().map(|v| v.position.unwrap()).collect()
        } else {
            self.layout().0
        }
    }
}

/// Why a hyperideal polygon fails to be proper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Improper {
    TooFewLines,
    /// Consecutive lines `junction`, `junction + 1` are tangent at infinity.
    IdealVertex { junction: usize },
    /// Consecutive half-planes are nested.
    NestedHalfPlanes { junction: usize },
    /// The segment or point at `junction` is not inside the half-plane of `line`.
    VertexOutside { junction: usize, line: usize },
    /// The boundary piece on `line` runs backwards, so the region is not
    /// bounded by the listed lines in order.
    Unbounded { line: usize },
    /// The boundary piece on `line` has zero length.
    DegenerateEdge { line: usize },
    /// The truncated boundary does not wind once around a convex region.
    NotConvex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Properness {
    Proper,
    Improper(Improper),
}

enum Junction {
    Finite { vertex: HPoint, cos: f64 },
    Hyperideal { on_prev: HPoint, on_next: HPoint, cos: f64 },
}

fn junctions(lines: &[HLine], tol: f64) -> std::result::Result<Vec<Junction>, Improper> {
    let n = lines.len();
    if n < 2 {
        return Err(Improper::TooFewLines);
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let (a, b) = (&lines[j], &lines[(j + 1) % n]);
        let c = -mink(&a.n, &b.n);
        if close(c.abs(), 1.0, tol) {
            return Err(Improper::IdealVertex { junction: j });
        }
        if c < -1.0 {
            return Err(Improper::NestedHalfPlanes { junction: j });
        }
        if c < 1.0 {
            let vertex = intersection(a, b).ok_or(Improper::IdealVertex { junction: j })?;
            out.push(Junction::Finite { vertex, cos: c });
        } else {
            let (p, q) = perpendicular_feet(a, b).ok_or(Improper::IdealVertex { junction: j })?;
            out.push(Junction::Hyperideal { on_prev: p, on_next: q, cos: c });
        }
    }
    Ok(out)
}

fn cut(lines: &[HLine], tol: f64) -> std::result::Result<GreenBlackPolygon, Improper> {
    let n = lines.len();
    let js = junctions(lines, tol)?;
    // Hyperideal vertices must lie in the region.
    for (j, jn) in js.iter().enumerate() {
        if let Junction::Hyperideal { on_prev, on_next, .. } = jn {
            if let Some(k) = lines.iter().position(|l| l.signed_distance(on_prev) < -tol || l.signed_distance(on_next) < -tol) {
                return Err(Improper::VertexOutside { junction: j, line: k });
            }
        }
    }
    // Start and end of the boundary piece on each line.
    let start = |i: usize| match &js[(i + n - 1) % n] {
        Junction::Finite { vertex, .. } => *vertex,
        Junction::Hyperideal { on_next, .. } => *on_next,
    };
    let end = |i: usize| match &js[i] {
        Junction::Finite { vertex, .. } => *vertex,
        Junction::Hyperideal { on_prev, .. } => *on_prev,
    };
    let mut black = vec![0.0; n];
    for (i, l) in lines.iter().enumerate() {
        let len = l.coordinate(&end(i)) - l.coordinate(&start(i));
        if len < -tol {
            return Err(Improper::Unbounded { line: i });
        }
        if len <= tol {
            return Err(Improper::DegenerateEdge { line: i });
        }
        black[i] = len;
    }
    for jn in &js {
        if let Junction::Finite { vertex, .. } = jn {
            if let Some(k) = lines.iter().position(|l| l.signed_distance(vertex) < -tol) {
                return Err(Improper::Unbounded { line: k });
            }
        }
    }
    // Vertex sequence starts at the end of line 0.
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for j in 0..n {
        let next = (j + 1) % n;
        match &js[j] {
            Junction::Finite { vertex, cos } => {
                vertices.push(GbVertex { color: Color::Green, angle: cos.acos(), position: Some(*vertex), source: Some(j) });
            }
            Junction::Hyperideal { on_prev, on_next, cos } => {
                vertices.push(GbVertex { color: Color::Black, angle: FRAC_PI_2, position: Some(*on_prev), source: Some(j) });
                edges.push(GbEdge { color: Color::Green, length: cos.acosh(), source: Some(j) });
                vertices.push(GbVertex { color: Color::Black, angle: FRAC_PI_2, position: Some(*on_next), source: Some(j) });
            }
        }
        edges.push(GbEdge { color: Color::Black, length: black[next], source: Some(next) });
    }
    let p = GreenBlackPolygon { vertices, edges };
    if !klein_convex(&p.positions(), tol) {
        return Err(Improper::NotConvex);
    }
    Ok(p)
}

/// Whether points, in order, are the vertices of a convex polygon winding
/// once counterclockwise. Checked in the Klein model, where geodesics are
/// straight.
pub fn klein_convex(pts: &[HPoint], tol: f64) -> bool {
    let k: Vec<[f64; 2]> = pts.iter().map(|p| p.klein()).collect();
    let n = k.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = k[i];
        let b = k[(i + 1) % n];
        let c = k[(i + 2) % n];
        let u = [b[0] - a[0], b[1] - a[1]];
        let v = [c[0] - b[0], c[1] - b[1]];
        let cross = u[0] * v[1] - u[1] * v[0];
        let dot = u[0] * v[0] + u[1] * v[1];
        let scale = (u[0].hypot(u[1]) * v[0].hypot(v[1])).max(f64::MIN_POSITIVE);
        if cross < -tol * scale {
            return false;
        }
        total += cross.atan2(dot);
    }
    (total - TAU).abs() < 1e-6
}

/// Checks whether the oriented lines, in counterclockwise order, cut out a
/// proper hyperideal polygon.
pub fn is_proper_hyperideal(lines: &[HLine], tol: f64) -> Properness {
    match cut(lines, tol) {
        Ok(_) => Properness::Proper,
        Err(e) => Properness::Improper(e),
    }
}

/// The green-black polygon of a proper hyperideal polygon: black pieces of
/// the support lines, green vertices where consecutive lines cross, and a
/// green common perpendicular with two black right-angled ends where they
/// do not.
pub fn greenblack_from_hyperideal(lines: &[HLine], tol: f64) -> Result<GreenBlackPolygon> {
    cut(lines, tol).map_err(|e| match e {
        Improper::IdealVertex { junction } => HyperbolicError::IdealVertex(junction),
        e => HyperbolicError::NotProper(e),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// A green edge must sit between two black edges.
    GreenEdgeNeighbors,
    /// Vertices on green edges are black, all others green.
    VertexColor,
    /// Black vertices are right angles.
    BlackRightAngle,
    NonPositiveLength,
    AngleOutOfRange,
    NotClosed,
    NotConvex,
    PositionMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub element: ElementRef,
    pub value: f64,
}

/// All rule violations of a green-black polygon. Closure and stored
/// positions are checked against the edge and angle data at `1e3 * tol`.
pub fn validate_greenblack(p: &GreenBlackPolygon, tol: f64) -> Vec<Violation> {
    let n = p.len();
    let mut out = Vec::new();
    let mut push = |rule, element, value| out.push(Violation { rule, element, value });
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let e = &p.edges[i];
        if e.color == Color::Green && (p.edges[prev].color == Color::Green || p.edges[(i + 1) % n].color == Color::Green) {
            push(Rule::GreenEdgeNeighbors, ElementRef::Edge(i), e.length);
        }
        if !(e.length > tol) {
            push(Rule::NonPositiveLength, ElementRef::Edge(i), e.length);
        }
        let v = &p.vertices[i];
        let on_green = p.edges[prev].color == Color::Green || e.color == Color::Green;
        if (v.color == Color::Black) != on_green {
            push(Rule::VertexColor, ElementRef::Vertex(i), v.angle);
        }
        if v.color == Color::Black && (v.angle - FRAC_PI_2).abs() > tol {
            push(Rule::BlackRightAngle, ElementRef::Vertex(i), v.angle);
        }
        if !(v.angle > 0.0 && v.angle < PI) {
            push(Rule::AngleOutOfRange, ElementRef::Vertex(i), v.angle);
        }
    }
    if n < 3 {
        return out;
    }
    let slack = 1e3 * tol;
    let closure = p.closure_error();
    if !(closure <= slack) {
        push(Rule::NotClosed, ElementRef::Vertex(0), closure);
    }
    let pts = p.positions();
    if !klein_convex(&pts, tol) {
        push(Rule::NotConvex, ElementRef::Vertex(0), 0.0);
    }
    if p.vertices.iter().all(|v| v.position.is_some()) {
        for i in 0..n {
            let d = pts[i].distance(&pts[(i + 1) % n]);
            if (d - p.edges[i].length).abs() > slack {
                push(Rule::PositionMismatch, ElementRef::Edge(i), d);
            }
            let a = pts[i].angle(&pts[(i + 1) % n], &pts[(i + n - 1) % n]);
            if (a - p.vertices[i].angle).abs() > slack {
                push(Rule::PositionMismatch, ElementRef::Vertex(i), a);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "none")]
    None,
}

impl Sign {
    pub fn negated(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::None => Sign::None,
        }
    }

    /// Sign of `a - b`, or none when equal within `tol`.
    pub fn compare(a: f64, b: f64, tol: f64) -> Sign {
        if close(a, b, tol) {
            Sign::None
        } else if a > b {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Sign changes in a cyclic walk, skipping unlabeled entries.
pub fn cyclic_sign_changes(signs: &[Sign]) -> usize {
    let s: Vec<Sign> = signs.iter().copied().filter(|&s| s != Sign::None).collect();
    (0..s.len()).filter(|&i| s[i] != s[(i + 1) % s.len()]).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourVertexReport {
    pub labels: Vec<(ElementRef, Sign)>,
    pub sign_changes: usize,
}

/// Whether two polygons have the same colors in the same order.
pub fn compatible(a: &GreenBlackPolygon, b: &GreenBlackPolygon) -> bool {
    a.pattern() == b.pattern()
}

/// Largest black-edge length difference.
pub fn black_edge_deviation(a: &GreenBlackPolygon, b: &GreenBlackPolygon) -> f64 {
    a.edges
        .iter()
        .zip(&b.edges)
        .filter(|(e, _)| e.color == Color::Black)
        .map(|(e, f)| (e.length - f.length).abs())
        .fold(0.0, f64::max)
}

/// Labels green elements by comparing `p` against `q`: `+` where the angle
/// or length of `p` is larger.
pub fn four_vertex_labels(p: &GreenBlackPolygon, q: &GreenBlackPolygon, tol: f64) -> Result<FourVertexReport> {
    if !compatible(p, q) {
        return Err(HyperbolicError::Incompatible);
    }
    let dev = black_edge_deviation(p, q);
    if dev > tol {
        return Err(HyperbolicError::NotBlackEdgeCongruent(dev));
    }
    let labels: Vec<(ElementRef, Sign)> = p
        .green_elements()
        .iter()
        .map(|&(e, _)| (e, Sign::compare(p.measure(e), q.measure(e), tol)))
        .collect();
    let signs: Vec<Sign> = labels.iter().map(|l| l.1).collect();
    Ok(FourVertexReport { sign_changes: cyclic_sign_changes(&signs), labels })
}

/// Complex angle of an interior angle, for serialization.
fn vertex_angle(a: f64) -> ComplexAngle {
    acos_theta(a.cos())
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub(crate) enum ElementRepr {
    Edge {
        color: Color,
        length: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<usize>,
    },
    Vertex {
        color: Color,
        angle: ComplexAngle,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        position: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<usize>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct PolygonRepr {
    pub elements: Vec<ElementRepr>,
    #[serde(default)]
    pub open: bool,
}

impl From<GreenBlackPolygon> for PolygonRepr {
    fn from(p: GreenBlackPolygon) -> PolygonRepr {
        let mut elements = Vec::new();
        for (v, e) in p.vertices.iter().zip(&p.edges) {
            elements.push(ElementRepr::Vertex {
                color: v.color,
                angle: vertex_angle(v.angle),
                position: v.position.map(|x| {
                    let w = x.poincare();
                    [w.re, w.im]
                }),
                source: v.source,
            });
            elements.push(ElementRepr::Edge { color: e.color, length: e.length, source: e.source });
        }
        PolygonRepr { elements, open: false }
    }
}

impl TryFrom<PolygonRepr> for GreenBlackPolygon {
    type Error = String;

    fn try_from(r: PolygonRepr) -> std::result::Result<GreenBlackPolygon, String> {
        if r.open {
            return Err("expected a closed polygon".into());
        }
        let mut els = r.elements;
        if matches!(els.first(), Some(ElementRepr::Edge { .. })) {
            els.rotate_left(1);
        }
        if els.len() < 6 || !els.len().is_multiple_of(2) {
            return Err("a polygon needs alternating vertices and edges, at least three of each".into());
        }
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for pair in els.chunks(2) {
            match (&pair[0], &pair[1]) {
                (ElementRepr::Vertex { color, angle, position, source }, ElementRepr::Edge { color: ec, length, source: es }) => {
                    if angle.branch != super::angle::Branch::Real {
                        return Err("vertex angles must be real".into());
                    }
                    let position = match position {
                        Some([a, b]) => Some(HPoint::from_poincare(Complex64::new(*a, *b)).ok_or("vertex position outside the unit disk")?),
                        None => None,
                    };
                    vertices.push(GbVertex { color: *color, angle: angle.value, position, source: *source });
                    edges.push(GbEdge { color: *ec, length: *length, source: *es });
                }
                _ => return Err("vertices and edges must alternate".into()),
            }
        }
        Ok(GreenBlackPolygon { vertices, edges })
    }
}

/// Perturbs green variable `pivot` by `delta` and re-closes the polygon by
/// solving for the green variables `free` with Newton's method.
pub fn flex(p: &GreenBlackPolygon, pivot: ElementRef, delta: f64, free: [ElementRef; 3]) -> Result<GreenBlackPolygon> {
    let mut q = p.clone();
    set_measure(&mut q, pivot, p.measure(pivot) + delta);
    for _ in 0..60 {
        let r = q.layout().1.closure_residual();
        if r.iter().map(|x| x.abs()).fold(0.0, f64::max) < 1e-14 {
            break;
        }
        let h = 1e-7;
        let mut jac = nalgebra::Matrix3::zeros();
        for (k, &e) in free.iter().enumerate() {
            let base = q.measure(e);
            let mut a = q.clone();
            set_measure(&mut a, e, base + h);
            let mut b = q.clone();
            set_measure(&mut b, e, base - h);
            let (ra, rb) = (a.layout().1.closure_residual(), b.layout().1.closure_residual());
            for row in 0..3 {
                jac[(row, k)] = (ra[row] - rb[row]) / (2.0 * h);
            }
        }
        let step = jac
            .lu()
            .solve(&nalgebra::Vector3::new(r[0], r[1], r[2]))
            .ok_or(HyperbolicError::DegenerateInput("singular flex Jacobian".into()))?;
        for (k, &e) in free.iter().enumerate() {
            let v = q.measure(e) - step[k];
            set_measure(&mut q, e, v);
        }
    }
    if q.closure_error() > 1e-10 {
        return Err(HyperbolicError::DegenerateInput("flex did not close".into()));
    }
    let pts = q.layout().0;
    for (v, x) in q.vertices.iter_mut().zip(pts) {
        v.position = Some(x);
    }
    Ok(q)
}

fn set_measure(p: &mut GreenBlackPolygon, e: ElementRef, value: f64) {
    match e {
        ElementRef::Vertex(i) => p.vertices[i].angle = value,
        ElementRef::Edge(i) => p.edges[i].length = value,
    }
}
