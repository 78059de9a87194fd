//! File formats and structured reports. Every file is a single JSON
//! document with a `format_version` field; unknown fields are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cpoly::{
    c_link, check_consistent_orientation, normalize_orientation, AbstractPolyhedron, CPolyhedron, Convexity, CpolyError, Diagnostic,
    OrientationCase,
};
use crate::hyperideal3d::ConvexPolyhedron3;
use crate::inversive::{Complex64, InversiveError, MoebiusMap, OrientedCircle, Orientation, PlanarCircle, SphericalCap, Vec3};
use crate::rigidity::{certify_congruence, CongruenceReport, CongruenceVerdict, RigidityError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: unsupported format_version {found} (expected {FORMAT_VERSION})")]
    Version { path: String, found: u32 },
    #[error("{0}")]
    Format(String),
    #[error("circle {name}: {source}")]
    Circle { name: String, source: InversiveError },
}

pub type Result<T> = std::result::Result<T, IoError>;

/// Parses a JSON document, keeping the position of the first error.
pub fn parse_json<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read { path: path.to_string(), message: e.to_string() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapLiteral {
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarLiteral {
    pub center: [f64; 2],
    pub radius: f64,
    pub orientation: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineLiteral {
    pub direction: [f64; 2],
    pub offset: f64,
    pub orientation: i8,
}

/// A circle as written in files: a spherical cap, or a circle or line in
/// the stereographic chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CircleLiteral {
    Cap(CapLiteral),
    Planar(PlanarLiteral),
    Line(LineLiteral),
}

fn orientation(o: i8) -> std::result::Result<Orientation, InversiveError> {
    match o {
        1 => Ok(Orientation::Positive),
        -1 => Ok(Orientation::Negative),
        _ => Err(InversiveError::DegenerateCircle(format!("orientation {o} is not 1 or -1"))),
    }
}

impl CircleLiteral {
    pub fn to_circle(&self) -> std::result::Result<OrientedCircle, InversiveError> {
        match *self {
            CircleLiteral::Cap(c) => {
                let cap = SphericalCap::new(Vec3::from(c.center), c.radius)?;
                Ok(OrientedCircle::from_cap(&cap))
            }
            CircleLiteral::Planar(p) => OrientedCircle::from_planar(&PlanarCircle::Circle {
                center: Complex64::new(p.center[0], p.center[1]),
                radius: p.radius,
                orientation: orientation(p.orientation)?,
            }),
            CircleLiteral::Line(l) => OrientedCircle::from_planar(&PlanarCircle::Line {
                direction: Complex64::new(l.direction[0], l.direction[1]),
                offset: l.offset,
                orientation: orientation(l.orientation)?,
            }),
        }
    }

    /// The cap form, which every circle has.
    pub fn from_circle(c: &OrientedCircle) -> CircleLiteral {
        let cap = c.to_cap();
        CircleLiteral::Cap(CapLiteral { center: cap.center.into(), radius: cap.radius })
    }
}

/// A vertex name, written as a string or a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Name {
    Int(u64),
    Str(String),
}

impl Name {
    fn text(&self) -> String {
        match self {
            Name::Int(i) => i.to_string(),
            Name::Str(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronSection {
    pub vertices: Vec<Name>,
    pub faces: Vec<Vec<Name>>,
}

/// A circle polyhedron file: the abstract polyhedron and a circle per vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CPolyFile {
    pub format_version: u32,
    pub polyhedron: PolyhedronSection,
    pub circles: BTreeMap<String, CircleLiteral>,
}

impl CPolyFile {
    pub fn parse(path: &str, text: &str) -> Result<CPolyFile> {
        let f: CPolyFile = parse_json(path, text)?;
        if f.format_version != FORMAT_VERSION {
            return Err(IoError::Version { path: path.to_string(), found: f.format_version });
        }
        Ok(f)
    }

    pub fn load(path: &str) -> Result<CPolyFile> {
        CPolyFile::parse(path, &read_file(path)?)
    }

    /// The abstract polyhedron and its circles, in vertex order.
    pub fn resolve(&self) -> Result<(AbstractPolyhedron, Vec<OrientedCircle>)> {
        let names: Vec<String> = self.polyhedron.vertices.iter().map(Name::text).collect();
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(IoError::Format(format!("duplicate vertex name {n:?}")));
            }
        }
        let faces = self
            .polyhedron
            .faces
            .iter()
            .map(|face| {
                face.iter()
                    .map(|n| {
                        let n = n.text();
                        index.get(&n).copied().ok_or_else(|| IoError::Format(format!("face names unknown vertex {n:?}")))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = self.circles.keys().find(|k| !index.contains_key(*k)) {
            return Err(IoError::Format(format!("circle given for unknown vertex {extra:?}")));
        }
        let circles = names
            .iter()
            .map(|n| {
                let lit = self.circles.get(n).ok_or_else(|| IoError::Format(format!("no circle for vertex {n:?}")))?;
                lit.to_circle().map_err(|source| IoError::Circle { name: n.clone(), source })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((AbstractPolyhedron { names, faces }, circles))
    }

    pub fn from_parts(base: &AbstractPolyhedron, circles: &[OrientedCircle]) -> CPolyFile {
        let name = |i: usize| Name::Str(base.names[i].clone());
        CPolyFile {
            format_version: FORMAT_VERSION,
            polyhedron: PolyhedronSection {
                vertices: (0..base.vertex_count()).map(name).collect(),
                faces: base.faces.iter().map(|f| f.iter().map(|&i| name(i)).collect()).collect(),
            },
            circles: base.names.iter().cloned().zip(circles.iter().map(CircleLiteral::from_circle)).collect(),
        }
    }

    pub fn from_cpolyhedron(cp: &CPolyhedron) -> CPolyFile {
        CPolyFile::from_parts(&cp.base, &cp.circles)
    }
}

/// A Euclidean polyhedron file with vertices given by coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronFile {
    pub format_version: u32,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl PolyhedronFile {
    pub fn parse(path: &str, text: &str) -> Result<PolyhedronFile> {
        let f: PolyhedronFile = parse_json(path, text)?;
        if f.format_version != FORMAT_VERSION {
            return Err(IoError::Version { path: path.to_string(), found: f.format_version });
        }
        Ok(f)
    }

    pub fn load(path: &str) -> Result<PolyhedronFile> {
        PolyhedronFile::parse(path, &read_file(path)?)
    }

    pub fn polyhedron(&self) -> ConvexPolyhedron3 {
        ConvexPolyhedron3 { vertices: self.vertices.clone(), faces: self.faces.clone() }
    }

    pub fn from_polyhedron(p: &ConvexPolyhedron3) -> PolyhedronFile {
        PolyhedronFile { format_version: FORMAT_VERSION, vertices: p.vertices.clone(), faces: p.faces.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated because an earlier check failed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub check: &'static str,
    pub status: Status,
    /// The first failure found.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
    /// Further failures of the same check.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub more: Vec<Value>,
}

/// Outcome of every check on a circle polyhedron, in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
    #[serde(skip)]
    pub cpolyhedron: Option<CPolyhedron>,
}

fn entry(check: &'static str, failures: Vec<Value>) -> CheckEntry {
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    let mut it = failures.into_iter();
    CheckEntry { check, status, witness: it.next().unwrap_or(Value::Null), more: it.collect() }
}

pub const CHECKS: [&str; 8] = [
    "abstract_combinatorics",
    "edge_uncoupled",
    "non_unitary",
    "c_planarity",
    "convexity",
    "orientation",
    "properness",
    "three_consecutive_non_coaxial",
];

fn names_of(base: &AbstractPolyhedron, vs: &[usize]) -> Value {
    json!(vs.iter().map(|&v| base.names.get(v).cloned().unwrap_or_else(|| v.to_string())).collect::<Vec<_>>())
}

fn diagnostic_witness(base: &AbstractPolyhedron, d: &Diagnostic) -> Value {
    let mut w = serde_json::to_value(d).unwrap_or(Value::Null);
    let verts: Vec<usize> = match *d {
        Diagnostic::EdgeCoupled { u, v, .. } | Diagnostic::Unitary { u, v, .. } => vec![u, v],
        Diagnostic::ThreeConsecutiveCoaxial { vertex, .. } => vec![vertex],
        Diagnostic::NotConvex { circle, .. } => vec![circle],
        _ => vec![],
    };
    if !verts.is_empty() {
        w["names"] = names_of(base, &verts);
    }
    w
}

/// Runs every check on the circles over `base`. Checks are recomputed from
/// the circles; nothing in the input is trusted.
pub fn validate(base: AbstractPolyhedron, circles: Vec<OrientedCircle>, tol: f64) -> ValidationReport {
    let mut checks: Vec<CheckEntry> = Vec::new();
    let cp = match CPolyhedron::assemble(base.clone(), circles, tol) {
        Ok(cp) => cp,
        Err(e) => {
            let (check, witness) = match &e {
                CpolyError::InvalidPolyhedron(issues) => ("abstract_combinatorics", json!(issues)),
                CpolyError::CircleCount { .. } => ("abstract_combinatorics", json!({ "error": e.to_string() })),
                CpolyError::Check(d) => ("c_planarity", diagnostic_witness(&base, d)),
                _ => ("c_planarity", json!({ "error": e.to_string() })),
            };
            for c in CHECKS {
                let (status, witness) = if c == check {
                    (Status::Fail, witness.clone())
                } else if c == "abstract_combinatorics" {
                    (Status::Pass, Value::Null)
                } else {
                    (Status::Skipped, Value::Null)
                };
                checks.push(CheckEntry { check: c, status, witness, more: vec![] });
            }
            return ValidationReport { passed: false, checks, cpolyhedron: None };
        }
    };
    let base = &cp.base;
    let by = |f: fn(&Diagnostic) -> bool| -> Vec<Value> {
        cp.diagnostics.iter().filter(|d| f(d)).map(|d| diagnostic_witness(base, d)).collect()
    };
    checks.push(entry("abstract_combinatorics", vec![]));
    checks.push(entry("edge_uncoupled", by(|d| matches!(d, Diagnostic::EdgeCoupled { .. }))));
    checks.push(entry("non_unitary", by(|d| matches!(d, Diagnostic::Unitary { .. }))));
    checks.push(entry("c_planarity", by(|d| matches!(d, Diagnostic::FaceNotCPlanar { .. }))));
    let convexity = match cp.convexity {
        Convexity::Convex => vec![],
        Convexity::NotConvex { .. } => by(|d| matches!(d, Diagnostic::NotConvex { .. })),
    };
    checks.push(entry("convexity", convexity));
    if cp.is_convex() {
        // Case ii is consistent; it becomes case i under the antipodal map,
        // and links are taken there.
        let case = check_consistent_orientation(&cp);
        let orientation = match case {
            OrientationCase::Inconsistent { face } => entry("orientation", vec![json!({ "case": "inconsistent", "face": face })]),
            _ => CheckEntry { check: "orientation", status: Status::Pass, witness: json!(case), more: vec![] },
        };
        checks.push(orientation);
        let mut improper = Vec::new();
        match normalize_orientation(&cp) {
            Ok(n) => {
                for v in 0..base.vertex_count() {
                    match c_link(&n, v) {
                        Ok(l) if l.is_proper() => {}
                        Ok(l) => improper.push(json!({ "vertex": base.names[v], "reason": l.properness })),
                        Err(e) => improper.push(json!({ "vertex": base.names[v], "error": e.to_string() })),
                    }
                }
            }
            Err(e) => improper.push(json!({ "error": e.to_string() })),
        }
        checks.push(entry("properness", improper));
    } else {
        for c in ["orientation", "properness"] {
            checks.push(CheckEntry { check: c, status: Status::Skipped, witness: Value::Null, more: vec![] });
        }
    }
    checks.push(entry("three_consecutive_non_coaxial", by(|d| matches!(d, Diagnostic::ThreeConsecutiveCoaxial { .. }))));
    let passed = checks.iter().all(|c| c.status == Status::Pass);
    ValidationReport { passed, checks, cpolyhedron: Some(cp) }
}

/// Map coefficients as `{"a": [re, im], ...}`.
pub fn map_json(t: &MoebiusMap) -> Value {
    let [a, b, c, d] = t.coefficients();
    json!({ "a": a, "b": b, "c": c, "d": d })
}

/// The congruence report with edges named by vertex names.
pub fn congruence_json(base: &AbstractPolyhedron, r: &CongruenceReport) -> Value {
    let name = |v: usize| base.names[v].clone();
    let edge = |&(u, v): &(usize, usize)| format!("{}-{}", name(u), name(v));
    let labels: BTreeMap<String, Value> =
        r.labels.labels.iter().map(|(e, s)| (edge(e), serde_json::to_value(s).unwrap_or(Value::Null))).collect();
    let (verdict, map, residual, witness) = match &r.verdict {
        CongruenceVerdict::Congruent { map, residual } => ("congruent", map_json(map), json!(residual), Value::Null),
        CongruenceVerdict::NotCongruent { witness } => ("not_congruent", Value::Null, Value::Null, json!(witness)),
    };
    json!({
        "verdict": verdict,
        "map": map,
        "residual": residual,
        "witness": witness,
        "labels": labels,
        "indeterminate_edges": r.labels.indeterminate.iter().map(edge).collect::<Vec<_>>(),
        "mixed_branch_edges": r.labels.mixed_branch.iter().map(edge).collect::<Vec<_>>(),
        "scan_vertex": r.scan_vertex.map(name),
        "sign_changes": r.sign_changes,
        "face_residuals": r.face_residuals,
        "dihedral_mismatches": r.dihedral_mismatches,
        "link_comparison": r.link_comparison,
        "margins": r.margins,
        "weakest_hypothesis": r.weakest_hypothesis,
    })
}

/// Result of comparing two validated circle polyhedra.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceOutcome {
    pub congruent: bool,
    /// The map carrying the first input onto the second, when congruent.
    pub map: Option<MoebiusMap>,
    pub report: Value,
}

/// Compares two validated circle polyhedra. Inputs in orientation case ii
/// are carried to case i by the antipodal map first, and a map found
/// between the normalized pair is conjugated back.
pub fn congruence(a: &CPolyhedron, b: &CPolyhedron, tol: f64) -> std::result::Result<CongruenceOutcome, RigidityError> {
    let not_congruent = |witness: Value| CongruenceOutcome {
        congruent: false,
        map: None,
        report: json!({ "verdict": "not_congruent", "witness": witness }),
    };
    if a.base.faces != b.base.faces || a.base.vertex_count() != b.base.vertex_count() {
        return Ok(not_congruent(json!({ "kind": "base_mismatch" })));
    }
    let (ca, cb) = (check_consistent_orientation(a), check_consistent_orientation(b));
    if ca != cb {
        // Moebius maps preserve the orientation case.
        return Ok(not_congruent(json!({ "kind": "orientation_case", "first": ca, "second": cb })));
    }
    let flipped = ca == OrientationCase::CaseII;
    let (na, nb) = (normalize_orientation(a)?, normalize_orientation(b)?);
    let r = certify_congruence(&na, &nb, tol)?;
    let mut report = congruence_json(&a.base, &r);
    let map = match &r.verdict {
        CongruenceVerdict::Congruent { map, .. } if flipped => Some(map.antipodal_conjugate()),
        CongruenceVerdict::Congruent { map, .. } => Some(*map),
        CongruenceVerdict::NotCongruent { .. } => None,
    };
    if let Some(m) = &map {
        report["map"] = map_json(m);
    }
    if flipped {
        report["antipodal_normalized"] = json!(true);
    }
    Ok(CongruenceOutcome { congruent: map.is_some(), map, report })
}
