use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use circlepoly::cpoly::{c_link, normalize_orientation, CPolyhedron};
use circlepoly::hyperbolic::svg::{lines_svg, polygon_svg};
use circlepoly::hyperbolic::HLine;
use circlepoly::hyperideal3d::{
    classify_strictly_hyperideal, dual_cpolyhedron, generate_fixture, proper_random_hull, Fixture, Hyper3Error,
};
use circlepoly::inversive::MoebiusMap;
use circlepoly::io::{congruence, validate, CPolyFile, PolyhedronFile, ValidationReport};
use circlepoly::rigidity::{combinatorial_scan, edge_labels, sign_changes_around};
use circlepoly::suite::{run_all, SuiteConfig, DEFAULT_SEED, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "circlepoly", version, about = "Circle polyhedra and their Moebius rigidity")]
struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output file (a directory for `render`). Reports go to stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a circle polyhedron file; exit 0 iff every check passes.
    Validate { file: String },
    /// Decide whether a Moebius map carries the first circle polyhedron onto the second.
    Congruence { first: String, second: String },
    /// The c-link at a vertex, optionally drawn as SVG.
    Link {
        file: String,
        vertex: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Edge sign labels between two circle polyhedra on the same base.
    Label { first: String, second: String },
    /// Dual circle polyhedron of a strictly hyperideal polyhedron file.
    ImportHyperideal { file: String },
    /// Write a fixture polyhedron, or with --dual its circle polyhedron.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        /// Size parameter; the point count for random hulls.
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        dual: bool,
        /// Apply a random Moebius map drawn from this seed to the dual.
        #[arg(long, requires = "dual")]
        transform_seed: Option<u64>,
        /// Redraw random hulls until every dual link is proper.
        #[arg(long)]
        proper: bool,
    },
    /// Run the seeded property suites; exit 0 iff all pass.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Draw every vertex link of a circle polyhedron into the --out directory.
    Render { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
    RandomHull,
}

/// Exit status 2: the input could not be read or is malformed.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn emit(out: Option<&Path>, v: &Value) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| InputError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_text(p: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(p, text).map_err(|e| InputError(format!("{}: {e}", p.display())))
}

fn load(path: &str, tol: f64) -> Result<ValidationReport, InputError> {
    let (base, circles) = CPolyFile::load(path)?.resolve()?;
    Ok(validate(base, circles, tol))
}

fn vertex_index(cp: &CPolyhedron, name: &str) -> Result<usize, InputError> {
    cp.base.vertex_index(name).ok_or_else(|| InputError(format!("unknown vertex {name:?}")))
}

fn cmd_validate(file: &str, tol: f64, out: Option<&Path>) -> Outcome {
    let r = load(file, tol)?;
    emit(out, &serde_json::to_value(&r)?)?;
    Ok(r.passed)
}

/// Both files validated, or the report that explains why not.
fn load_pair(first: &str, second: &str, tol: f64) -> Result<Result<[CPolyhedron; 2], Value>, InputError> {
    let mut out = Vec::new();
    for (side, path) in [("first", first), ("second", second)] {
        let r = load(path, tol)?;
        match (r.passed, r.cpolyhedron.clone()) {
            (true, Some(cp)) => out.push(cp),
            _ => return Ok(Err(json!({ "verdict": "validation_failed", "side": side, "report": r }))),
        }
    }
    let [a, b]: [CPolyhedron; 2] = out.try_into().map_err(|_| InputError("two inputs expected".into()))?;
    Ok(Ok([a, b]))
}

fn cmd_congruence(first: &str, second: &str, tol: f64, out: Option<&Path>) -> Outcome {
    let [a, b] = match load_pair(first, second, tol)? {
        Ok(pair) => pair,
        Err(report) => {
            emit(out, &report)?;
            return Ok(false);
        }
    };
    let c = congruence(&a, &b, tol)?;
    emit(out, &c.report)?;
    Ok(c.congruent)
}

fn line_json(l: &HLine) -> Value {
    json!([l.n.x, l.n.y, l.n.z])
}

fn cmd_link(file: &str, vertex: &str, svg: Option<&Path>, tol: f64, out: Option<&Path>) -> Outcome {
    let r = load(file, tol)?;
    let Some(cp) = r.cpolyhedron else {
        emit(out, &json!({ "error": "validation_failed", "report": r.checks }))?;
        return Ok(false);
    };
    // Links are taken in orientation case i.
    let cp = normalize_orientation(&cp).unwrap_or(cp);
    let v = vertex_index(&cp, vertex)?;
    let link = c_link(&cp, v)?;
    let report = json!({
        "vertex": vertex,
        "faces": link.faces,
        "neighbors": link.neighbors.iter().map(|&u| cp.base.names[u].clone()).collect::<Vec<_>>(),
        "proper": link.is_proper(),
        "properness": link.properness,
        "polygon": link.polygon,
        "lines": link.lines.iter().map(|l| line_json(&l.line)).collect::<Vec<_>>(),
    });
    if let Some(p) = svg {
        let text = match &link.polygon {
            Some(poly) => polygon_svg(poly),
            None => lines_svg(&link.lines.iter().map(|l| l.line).collect::<Vec<_>>()),
        };
        write_text(p, &text)?;
    }
    emit(out, &report)?;
    Ok(link.is_proper())
}

fn cmd_label(first: &str, second: &str, tol: f64, out: Option<&Path>) -> Outcome {
    let [a, b] = match load_pair(first, second, tol)? {
        Ok(pair) => pair,
        Err(report) => {
            emit(out, &report)?;
            return Ok(false);
        }
    };
    let (a, b) = (normalize_orientation(&a)?, normalize_orientation(&b)?);
    let labels = edge_labels(&a, &b, tol)?;
    let scan = combinatorial_scan(&labels, &a.base).ok();
    let name = |v: usize| a.base.names[v].clone();
    let edge = |&(u, v): &(usize, usize)| format!("{}-{}", name(u), name(v));
    let map: serde_json::Map<String, Value> =
        labels.labels.iter().map(|(e, s)| (edge(e), serde_json::to_value(s).unwrap_or(Value::Null))).collect();
    emit(
        out,
        &json!({
            "labels": map,
            "labeled_edges": labels.labeled_count(),
            "indeterminate_edges": labels.indeterminate.iter().map(edge).collect::<Vec<_>>(),
            "scan_vertex": scan.map(name),
            "sign_changes": scan.map(|v| sign_changes_around(&labels, &a.base, v)),
        }),
    )?;
    Ok(true)
}

/// Geometric failures of the dual construction exit 1; malformed input 2.
fn dual_or_report(p: &circlepoly::hyperideal3d::ConvexPolyhedron3, tol: f64, out: Option<&Path>) -> Result<Option<CPolyhedron>, InputError> {
    match dual_cpolyhedron(p, tol) {
        Ok(cp) => Ok(Some(cp)),
        Err(e @ Hyper3Error::InvalidPolyhedron(_)) => Err(e.into()),
        Err(e) => {
            let class = classify_strictly_hyperideal(p, tol).ok();
            emit(out, &json!({ "error": e.to_string(), "classification": class }))?;
            Ok(None)
        }
    }
}

fn cmd_import(file: &str, tol: f64, out: Option<&Path>) -> Outcome {
    let p = PolyhedronFile::load(file)?.polyhedron();
    let Some(cp) = dual_or_report(&p, tol, out)? else { return Ok(false) };
    emit(out, &serde_json::to_value(CPolyFile::from_cpolyhedron(&cp))?)?;
    Ok(true)
}

struct GenArgs {
    kind: Kind,
    param: Option<f64>,
    seed: u64,
    dual: bool,
    transform_seed: Option<u64>,
    proper: bool,
}

fn cmd_gen(g: GenArgs, tol: f64, out: Option<&Path>) -> Outcome {
    let fixture = match g.kind {
        Kind::Cube => Fixture::Cube { a: g.param.unwrap_or(0.8) },
        Kind::Octahedron => Fixture::Octahedron { s: g.param.unwrap_or(1.2) },
        Kind::Dodecahedron => Fixture::Dodecahedron { r: g.param.unwrap_or(1.15) },
        Kind::Icosahedron => Fixture::Icosahedron { r: g.param.unwrap_or(1.1) },
        Kind::RandomHull => {
            let n = g.param.unwrap_or(8.0);
            if !(n >= 0.0 && n.fract() == 0.0) {
                return Err(InputError(format!("point count {n} is not a whole number")));
            }
            Fixture::RandomHull { points: n as usize }
        }
    };
    let p = match (fixture, g.proper) {
        (Fixture::RandomHull { points }, true) => proper_random_hull(points, g.seed, tol)?.0,
        (_, true) => return Err(InputError("--proper applies to random hulls only".into())),
        _ => generate_fixture(&fixture, g.seed, tol)?,
    };
    if !g.dual {
        emit(out, &serde_json::to_value(PolyhedronFile::from_polyhedron(&p))?)?;
        return Ok(true);
    }
    let Some(mut cp) = dual_or_report(&p, tol, out)? else { return Ok(false) };
    if let Some(s) = g.transform_seed {
        let t = MoebiusMap::random(&mut ChaCha8Rng::seed_from_u64(s));
        cp = cp.transformed(&t)?;
    }
    emit(out, &serde_json::to_value(CPolyFile::from_cpolyhedron(&cp))?)?;
    Ok(true)
}

fn cmd_suite(seed: u64, trials: Option<usize>, tol: f64, out: Option<&Path>) -> Outcome {
    let results = run_all(&SuiteConfig { seed, trials, tol });
    let passed = results.iter().all(|r| r.passed);
    emit(out, &json!({ "seed": seed, "tol": tol, "passed": passed, "suites": results }))?;
    Ok(passed)
}

fn cmd_render(file: &str, tol: f64, out: Option<&Path>) -> Outcome {
    let dir = out.ok_or_else(|| InputError("render needs --out DIR".into()))?;
    std::fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    let r = load(file, tol)?;
    let Some(cp) = r.cpolyhedron else {
        emit(None, &json!({ "error": "validation_failed", "report": r.checks }))?;
        return Ok(false);
    };
    let cp = normalize_orientation(&cp).unwrap_or(cp);
    let mut all_proper = true;
    let mut written = Vec::new();
    for v in 0..cp.base.vertex_count() {
        let link = c_link(&cp, v)?;
        let text = match &link.polygon {
            Some(poly) => polygon_svg(poly),
            None => {
                all_proper = false;
                lines_svg(&link.lines.iter().map(|l| l.line).collect::<Vec<_>>())
            }
        };
        let path = dir.join(format!("link_{}.svg", cp.base.names[v]));
        write_text(&path, &text)?;
        written.push(path.display().to_string());
    }
    emit(None, &json!({ "written": written, "all_proper": all_proper }))?;
    Ok(all_proper)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (tol, out) = (cli.tol, cli.out.as_deref());
    if !(tol > 0.0 && tol.is_finite()) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(2);
    }
    let result = match cli.cmd {
        Cmd::Validate { file } => cmd_validate(&file, tol, out),
        Cmd::Congruence { first, second } => cmd_congruence(&first, &second, tol, out),
        Cmd::Link { file, vertex, svg } => cmd_link(&file, &vertex, svg.as_deref(), tol, out),
        Cmd::Label { first, second } => cmd_label(&first, &second, tol, out),
        Cmd::ImportHyperideal { file } => cmd_import(&file, tol, out),
        Cmd::Gen { kind, param, seed, dual, transform_seed, proper } => {
            cmd_gen(GenArgs { kind, param, seed, dual, transform_seed, proper }, tol, out)
        }
        Cmd::Suite { seed, trials } => cmd_suite(seed, trials, tol, out),
        Cmd::Render { file } => cmd_render(&file, tol, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
