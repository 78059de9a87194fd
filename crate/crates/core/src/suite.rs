//! Seeded randomized property suites. Each suite compares a worst-case
//! measurement against a gate; gates scale with the tolerance so the
//! default tolerance `1e-9` reproduces the documented thresholds.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cpoly::{c_link, compare_clinks, cube, link_identities, octahedron, CPolyhedron, LinkComparison};
use crate::hyperbolic::{
    acos_theta, arm_lemma_check, containment_worst, cos_theta, hypercycle_monotonicity_check, line_facing_origin,
    random_arm_pair, random_greenblack, random_region_flow, Color, HPoint,
};
use crate::hyperideal3d::{dual_cpolyhedron, generate_fixture, proper_random_hull, Fixture};
use crate::inversive::{
    inv_dist, inv_dist_crossratio, inv_dist_spherical, ortho_circle_fit, random_circle, Complex64, InversiveError,
    MoebiusMap, OrientedCircle, SphericalCap, Vec3,
};
use crate::rigidity::{
    certify_congruence, combinatorial_scan, lemma_three_coaxial_check, random_labeling, random_three_coaxial,
    sign_changes_around, CongruenceVerdict, RigidityError,
};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the trial count of every randomized suite.
    pub trials: Option<usize>,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig { seed: DEFAULT_SEED, trials: None, tol: DEFAULT_TOL }
    }
}

impl SuiteConfig {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    /// A gate given at the default tolerance, scaled to the configured one.
    fn gate(&self, at_default: f64) -> f64 {
        at_default * self.tol / DEFAULT_TOL
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub trials: usize,
    pub violations: usize,
    pub rejected: usize,
    /// Worst measured quantity, compared against `gate`.
    pub worst: f64,
    pub gate: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str, gate: f64) -> SuiteResult {
        SuiteResult { name, passed: false, trials: 0, violations: 0, rejected: 0, worst: 0.0, gate, notes: Vec::new() }
    }

    /// Records one measurement; a violation if it exceeds the gate or is NaN.
    fn measure(&mut self, x: f64) {
        self.trials += 1;
        if !(x <= self.gate) {
            self.violations += 1;
        }
        if !(x <= self.worst) {
            self.worst = x;
        }
    }

    /// Records one boolean outcome.
    fn expect(&mut self, ok: bool) {
        self.trials += 1;
        if !ok {
            self.violations += 1;
        }
    }

    fn fail(&mut self, note: String) {
        self.violations += 1;
        if self.notes.len() < 5 {
            self.notes.push(note);
        }
    }

    fn done(mut self) -> SuiteResult {
        self.passed = self.violations == 0 && self.trials > 0;
        self
    }
}

/// Circle radii kept away from points and the whole sphere.
fn circle<R: Rng + ?Sized>(rng: &mut R) -> OrientedCircle {
    random_circle(rng, 0.1, PI - 0.1)
}

/// Cross-ratio and spherical definitions of the inversive distance agree.
pub fn invdist_definitions(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("invdist_definitions", cfg.gate(1e-9));
    let mut rng = cfg.rng(1);
    let want = cfg.trials(10_000);
    while r.trials < want && r.rejected < want {
        let (a, b) = (circle(&mut rng), circle(&mut rng));
        let (Ok(pa), Ok(pb)) = (a.to_planar(1e-6), b.to_planar(1e-6)) else {
            r.rejected += 1;
            continue;
        };
        match inv_dist_crossratio(&pa, &pb) {
            Ok(x) => r.measure((x - inv_dist_spherical(&a.to_cap(), &b.to_cap())).abs()),
            Err(_) => r.rejected += 1,
        }
    }
    r.done()
}

/// Inversive distance is invariant under Moebius maps and odd under
/// reversing one circle.
pub fn moebius_invariance(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("moebius_invariance", cfg.gate(1e-9));
    let flip_gate = cfg.gate(1e-12);
    let mut rng = cfg.rng(2);
    let mut worst_flip: f64 = 0.0;
    for _ in 0..cfg.trials(10_000) {
        let (a, b) = (circle(&mut rng), circle(&mut rng));
        let t = MoebiusMap::random(&mut rng);
        let d = inv_dist(&a, &b);
        let moved = inv_dist(&t.apply_circle(&a), &t.apply_circle(&b));
        r.measure((moved - d).abs() / d.abs().max(1.0));
        let flip = (inv_dist(&a.reversed(), &b) + d).abs();
        worst_flip = worst_flip.max(flip);
        if !(flip <= flip_gate) {
            r.fail(format!("orientation flip off by {flip:e}"));
        }
    }
    r.notes.push(format!("worst flip antisymmetry error {worst_flip:e} (gate {flip_gate:e})"));
    r.done()
}

/// The ortho-circle of admissible triples, and the coaxial and no-real
/// branches on constructed inputs.
pub fn ortho_circle(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("ortho_circle", cfg.gate(1e-10));
    let mut rng = cfg.rng(3);
    let want = cfg.trials(1000);
    let mut attempts = 0;
    while r.trials < want && attempts < 100 * want {
        attempts += 1;
        let cs = [circle(&mut rng), circle(&mut rng), circle(&mut rng)];
        match ortho_circle_fit(&cs, cfg.tol) {
            Ok(fit) => r.measure(fit.residual),
            Err(_) => r.rejected += 1,
        }
    }
    let great = |n: Vec3| OrientedCircle::from_cap(&SphericalCap { center: n, radius: FRAC_PI_2 });
    let axes = [great(Vec3::x()), great(Vec3::y()), great(Vec3::z())];
    if ortho_circle_fit(&axes, cfg.tol).map(|f| f.circle) != Err(InversiveError::NoRealOrthoCircle) {
        r.fail("coordinate great circles did not report NoRealOrthoCircle".into());
    }
    let meridian = |phi: f64| great(Vec3::new(phi.cos(), phi.sin(), 0.0));
    let pencil = [meridian(0.0), meridian(0.8), meridian(2.0)];
    if ortho_circle_fit(&pencil, cfg.tol).map(|f| f.circle) != Err(InversiveError::Coaxial) {
        r.fail("meridians did not report Coaxial".into());
    }
    r.done()
}

/// `cos_theta(acos_theta(r)) = r` on a grid of `[-10, 10]`.
pub fn theta_round_trip(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("theta_round_trip", cfg.gate(1e-12));
    for k in 0..=2000 {
        let x = -10.0 + k as f64 * 0.01;
        r.measure((cos_theta(&acos_theta(x)) - x).abs());
    }
    r.done()
}

pub fn three_coaxial(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("lemma_three_coaxial", 0.0);
    let mut rng = cfg.rng(5);
    for _ in 0..cfg.trials(500) {
        let ([o, a, b, c], rej) = random_three_coaxial(&mut rng, cfg.tol);
        r.rejected += rej;
        match lemma_three_coaxial_check(&o, &a, &b, &c, cfg.tol) {
            Ok(ok) => r.expect(ok),
            Err(e) => r.fail(e.to_string()),
        }
    }
    r.done()
}

pub fn hypercycle(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("lemma_hypercycle", 0.0);
    let mut rng = cfg.rng(6);
    for _ in 0..cfg.trials(500) {
        let l = line_facing_origin(rng.random_range(0.0..TAU), rng.random_range(0.0..1.5));
        let Some(p) = HPoint::from_poincare(Complex64::from_polar(rng.random_range(0.0..0.9), rng.random_range(0.0..TAU))) else {
            r.rejected += 1;
            continue;
        };
        let delta = rng.random_range(-2.0..2.0);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mut offs: Vec<f64> = (0..8).map(|_| rng.random_range(1e-3..3.0)).collect();
        offs.sort_by(f64::total_cmp);
        offs.dedup();
        let offs: Vec<f64> = offs.iter().map(|t| sign * t).collect();
        match hypercycle_monotonicity_check(&l, delta, &p, &offs) {
            Ok(ok) => r.expect(ok),
            Err(e) => r.fail(e.to_string()),
        }
    }
    r.done()
}

/// The region-flow inequality on configurations drawn from the stated
/// hypotheses, or with `strengthened` only from those where the hypercycle
/// of `k` through `c` crosses `BC`.
pub fn region_flow(cfg: &SuiteConfig, strengthened: bool) -> SuiteResult {
    let name = if strengthened { "lemma_region_flow_strengthened" } else { "lemma_region_flow" };
    let mut r = SuiteResult::new(name, 0.0);
    let mut rng = cfg.rng(if strengthened { 8 } else { 7 });
    let want = cfg.trials(500);
    while r.trials < want {
        let (flow, rej) = random_region_flow(&mut rng);
        r.rejected += rej;
        if strengthened && !flow.crosses_c_hypercycle() {
            r.rejected += 1;
            continue;
        }
        match flow.check(cfg.tol) {
            Ok(true) => r.expect(true),
            Ok(false) => {
                r.trials += 1;
                let (bc, big) = (flow.b.distance(&flow.c), flow.big_b.distance(&flow.big_c));
                r.fail(format!("|bc| = {bc:.6} > |BC| = {big:.6}"));
            }
            Err(e) => r.fail(e.to_string()),
        }
    }
    r.done()
}

/// Shortest paths to green edges meet them at right angles.
pub fn containment(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("lemma_containment", cfg.gate(1e-6));
    let mut rng = cfg.rng(9);
    let want = cfg.trials(500);
    let mut with_green = 0;
    while r.trials < want {
        let (p, _, rej) = random_greenblack(&mut rng, 3, 7);
        r.rejected += rej;
        if p.green_edge_count() > 0 {
            with_green += 1;
        }
        r.measure(containment_worst(&p));
    }
    r.notes.push(format!("{with_green} polygons with green edges"));
    r.done()
}

/// The free-vertex inequality of the arm lemma, plus equality when the two
/// chains coincide.
pub fn arm_lemma(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("lemma_arm", 0.0);
    let mut rng = cfg.rng(10);
    let mut strict = 0;
    for _ in 0..cfg.trials(500) {
        let (a, b, rej) = random_arm_pair(&mut rng);
        r.rejected += rej;
        match (arm_lemma_check(&a, &b, cfg.tol), arm_lemma_check(&a, &a, cfg.tol)) {
            (Ok(v), Ok(same)) => {
                r.expect(v.consistent && same.consistent && same.equal);
                if !v.equal {
                    strict += 1;
                }
            }
            (Err(e), _) | (_, Err(e)) => r.fail(e.to_string()),
        }
    }
    r.notes.push(format!("{strict} pairs with strict inequality"));
    r.done()
}

/// Every labeling with a labeled edge has a vertex with at most two sign
/// changes.
pub fn cauchy_scan(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("cauchy_scan", 0.0);
    let mut rng = cfg.rng(11);
    let dodecahedron = match generate_fixture(&Fixture::Dodecahedron { r: 1.15 }, 0, DEFAULT_TOL) {
        Ok(p) => p.combinatorics(),
        Err(e) => {
            r.fail(e.to_string());
            return r.done();
        }
    };
    let graphs = [cube(), octahedron(), dodecahedron];
    for k in 0..cfg.trials(10_000) {
        let p = &graphs[k % 3];
        let l = random_labeling(&mut rng, p);
        match combinatorial_scan(&l, p) {
            Ok(v) => r.expect(sign_changes_around(&l, p, v) <= 2),
            Err(RigidityError::NoLabeledEdge) => r.expect(l.labeled_count() == 0),
            Err(e) => r.fail(e.to_string()),
        }
    }
    r.done()
}

fn dual(fx: Fixture, tol: f64) -> Result<CPolyhedron, String> {
    let p = generate_fixture(&fx, 0, tol).map_err(|e| e.to_string())?;
    dual_cpolyhedron(&p, tol).map_err(|e| e.to_string())
}

/// Hyperideal cube duals: convexity, properness, closed-form distances and
/// the link color patterns at both ends of the window.
pub fn dual_construction(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("dual_construction", cfg.gate(1e-10));
    let angle_gate = cfg.gate(1e-8);
    for a in [0.65, 0.8] {
        let cp = match dual(Fixture::Cube { a }, cfg.tol) {
            Ok(cp) => cp,
            Err(e) => {
                r.fail(e);
                continue;
            }
        };
        r.expect(cp.is_convex() && cp.is_built() && cp.is_non_unitary());
        let (adj, opp) = (a * a / (1.0 - a * a), (1.0 + a * a) / (1.0 - a * a));
        for u in 0..6 {
            for v in u + 1..6 {
                let d = inv_dist(&cp.circles[u], &cp.circles[v]);
                let want = if cp.base.edge_faces(u, v).is_some() { adj } else { opp };
                r.measure((d - want).abs());
            }
        }
        for v in 0..6 {
            let link = match c_link(&cp, v) {
                Ok(l) => l,
                Err(e) => {
                    r.fail(e.to_string());
                    continue;
                }
            };
            let Some(p) = link.polygon else {
                r.fail(format!("a = {a}: improper link at {v}"));
                continue;
            };
            if a == 0.8 {
                r.expect(p.green_edge_count() == 0);
            } else {
                let n = p.len();
                r.expect((0..n).all(|i| p.edges[i].color != p.edges[(i + 1) % n].color));
                for x in p.vertices.iter().filter(|x| x.color == Color::Black) {
                    let dev = (x.angle - FRAC_PI_2).abs();
                    r.trials += 1;
                    if !(dev <= angle_gate) {
                        r.fail(format!("black vertex angle off by {dev:e}"));
                    }
                }
            }
        }
    }
    r.done()
}

/// Moebius images are certified congruent with the right map; different
/// cubes and perturbed circles are not.
pub fn rigidity_round_trip(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("rigidity_round_trip", cfg.gate(1e-8));
    let map_gate = cfg.gate(1e-7);
    let mut rng = cfg.rng(12);
    let maps = cfg.trials(20);
    let mut fixtures = Vec::new();
    for fx in [Fixture::Cube { a: 0.8 }, Fixture::Cube { a: 0.65 }, Fixture::Dodecahedron { r: 1.15 }] {
        match dual(fx, cfg.tol) {
            Ok(cp) => fixtures.push((fx.kind_name().to_string(), cp)),
            Err(e) => r.fail(e),
        }
    }
    let mut skipped = 0;
    for k in 0..10 {
        match proper_random_hull(8, cfg.seed.wrapping_add(k), cfg.tol).and_then(|(p, s)| {
            skipped += s;
            dual_cpolyhedron(&p, cfg.tol)
        }) {
            Ok(cp) => fixtures.push((format!("random_hull_{k}"), cp)),
            Err(e) => r.fail(e.to_string()),
        }
    }
    r.notes.push(format!("{skipped} random hulls with improper links skipped"));
    let mut worst_map: f64 = 0.0;
    for (name, cp) in &fixtures {
        for _ in 0..maps {
            let t0 = MoebiusMap::random(&mut rng);
            let report = cp.transformed(&t0).map_err(|e| e.to_string()).and_then(|m| {
                certify_congruence(cp, &m, cfg.tol).map_err(|e| e.to_string())
            });
            match report.map(|rep| rep.verdict) {
                Ok(CongruenceVerdict::Congruent { map, residual }) => {
                    let dm = map.projective_distance(&t0);
                    worst_map = worst_map.max(dm);
                    r.measure(residual);
                    if !(dm <= map_gate) {
                        r.fail(format!("{name}: recovered map off by {dm:e}"));
                    }
                }
                Ok(v) => r.fail(format!("{name}: {v:?}")),
                Err(e) => r.fail(format!("{name}: {e}")),
            }
        }
    }
    r.notes.push(format!("worst projective map distance {worst_map:e} (gate {map_gate:e})"));

    // Negative controls.
    match (dual(Fixture::Cube { a: 0.8 }, cfg.tol), dual(Fixture::Cube { a: 0.79 }, cfg.tol)) {
        (Ok(a), Ok(b)) => match certify_congruence(&a, &b, cfg.tol) {
            Ok(rep) => r.expect(!rep.verdict.is_congruent() && !rep.dihedral_mismatches.is_empty()),
            Err(e) => r.fail(e.to_string()),
        },
        _ => r.fail("cube fixtures failed to build".into()),
    }
    for (name, cp) in fixtures.iter().take(3) {
        for (k, dr) in [1e-3, -2e-3, 5e-3].into_iter().enumerate() {
            let v = (7 * k + 1) % cp.circles.len();
            let mut cs = cp.circles.clone();
            let cap = cs[v].to_cap();
            cs[v] = OrientedCircle::from_cap(&SphericalCap { center: cap.center, radius: cap.radius + dr });
            let bent = match crate::cpoly::build_cpolyhedron(cp.base.clone(), cs, cfg.tol) {
                Ok(b) => b,
                Err(e) => {
                    r.fail(format!("{name}: perturbed input rejected: {e}"));
                    continue;
                }
            };
            match certify_congruence(cp, &bent, cfg.tol) {
                Ok(rep) => match rep.verdict {
                    CongruenceVerdict::NotCongruent { .. } => r.expect(true),
                    v => r.fail(format!("{name}: perturbation {dr} gave {v:?}")),
                },
                Err(e) => r.fail(format!("{name}: {e}")),
            }
        }
    }
    r.done()
}

/// Links of Moebius images are congruent, black edge lengths match link
/// points, and green elements match complex dihedral angles.
pub fn clink_invariance(cfg: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("clink_invariance", cfg.gate(1e-8));
    let ident_gate = cfg.gate(1e-9);
    let mut rng = cfg.rng(13);
    let maps = cfg.trials(100);
    let fixtures = [
        Fixture::Cube { a: 0.8 },
        Fixture::Cube { a: 0.65 },
        Fixture::Octahedron { s: 1.2 },
        Fixture::Dodecahedron { r: 1.15 },
        Fixture::Icosahedron { r: 1.1 },
    ];
    let mut worst_ident: f64 = 0.0;
    for fx in fixtures {
        let cp = match dual(fx, cfg.tol) {
            Ok(cp) => cp,
            Err(e) => {
                r.fail(e);
                continue;
            }
        };
        let links: Vec<_> = (0..cp.base.vertex_count()).map(|v| c_link(&cp, v)).collect();
        for (v, l) in links.iter().enumerate() {
            match l.as_ref().map_err(|e| e.to_string()).and_then(|l| link_identities(&cp, l).map_err(|e| e.to_string())) {
                Ok(id) => {
                    let w = id.black_length.max(id.dihedral);
                    worst_ident = worst_ident.max(w);
                    if !(w <= ident_gate) {
                        r.fail(format!("{}: identities at {v} off by {w:e}", fx.kind_name()));
                    }
                }
                Err(e) => r.fail(format!("{}: {e}", fx.kind_name())),
            }
        }
        for _ in 0..maps {
            let t = MoebiusMap::random(&mut rng);
            let Ok(moved) = cp.transformed(&t) else {
                r.fail(format!("{}: image failed to assemble", fx.kind_name()));
                continue;
            };
            for (v, l) in links.iter().enumerate() {
                let (Ok(a), Ok(b)) = (l, c_link(&moved, v)) else {
                    r.fail(format!("{}: link {v} failed", fx.kind_name()));
                    continue;
                };
                match compare_clinks(a, &b, 1e3 * cfg.tol) {
                    LinkComparison::Congruent { max_deviation } => r.measure(max_deviation),
                    other => r.fail(format!("{}: link {v}: {other:?}", fx.kind_name())),
                }
            }
        }
    }
    r.notes.push(format!("worst link identity error {worst_ident:e} (gate {ident_gate:e})"));
    r.done()
}

/// Every suite, sorted by name.
pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteResult> {
    let mut out = vec![
        invdist_definitions(cfg),
        moebius_invariance(cfg),
        ortho_circle(cfg),
        theta_round_trip(cfg),
        three_coaxial(cfg),
        hypercycle(cfg),
        region_flow(cfg, false),
        region_flow(cfg, true),
        containment(cfg),
        arm_lemma(cfg),
        cauchy_scan(cfg),
        dual_construction(cfg),
        rigidity_round_trip(cfg),
        clink_invariance(cfg),
    ];
    out.sort_by_key(|r| r.name);
    out
}
