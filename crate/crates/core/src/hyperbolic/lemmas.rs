use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use serde::Serialize;

use super::hyperboloid::{angle_between, mink, HLine, HPoint};
use super::polygon::{greenblack_from_hyperideal, Color, ElementRef, GreenBlackPolygon};
use super::{HyperbolicError, Result};
use crate::inversive::Vec3;

/// Point at arc coordinate `u` on the hypercycle at signed distance
/// `delta` from `line`.
pub fn hypercycle_point(line: &HLine, delta: f64, u: f64) -> HPoint {
    HPoint(line.point_at(u).0 * delta.cosh() + line.n * delta.sinh())
}

/// Distance from `p` to points of a hypercycle of `line`, sampled at arc
/// offsets `offsets` from the foot `q` of the perpendicular through `p`,
/// must strictly increase with the offset. Offsets must be nonzero, share a
/// sign, and be sorted by magnitude.
pub fn hypercycle_monotonicity_check(line: &HLine, delta: f64, p: &HPoint, offsets: &[f64]) -> Result<bool> {
    let same_side = offsets.iter().all(|&t| t > 0.0) || offsets.iter().all(|&t| t < 0.0);
    let sorted = offsets.windows(2).all(|w| w[0].abs() < w[1].abs());
    if !same_side || !sorted {
        return Err(HyperbolicError::HypothesisViolated("offsets must be on one side of the foot, increasing".into()));
    }
    let u0 = line.coordinate(&line.foot(p));
    let mut prev = p.distance(&hypercycle_point(line, delta, u0));
    for &t in offsets {
        let d = p.distance(&hypercycle_point(line, delta, u0 + t));
        if !(d > prev) {
            return Ok(false);
        }
        prev = d;
    }
    Ok(true)
}

/// Configuration of the region-flow lemma: `R` is bounded by the rays `k`,
/// `l` and the segment of `m` between them, all three oriented with `R` on
/// their left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionFlow {
    pub k: HLine,
    pub l: HLine,
    pub m: HLine,
    pub b: HPoint,
    pub c: HPoint,
    pub big_b: HPoint,
    pub big_c: HPoint,
}

impl RegionFlow {
    fn in_region(&self, x: &HPoint, tol: f64) -> bool {
        [self.k, self.l, self.m].iter().all(|h| h.signed_distance(x) > -tol)
    }

    /// Checks the hypotheses and evaluates `|bc| <= |BC|`.
    pub fn check(&self, tol: f64) -> Result<bool> {
        let bad = |why: &str| Err(HyperbolicError::HypothesisViolated(why.into()));
        if mink(&self.m.n, &self.k.n).abs() > tol || mink(&self.m.n, &self.l.n).abs() > tol {
            return bad("m is not orthogonal to k and l");
        }
        for x in [&self.c, &self.big_b, &self.big_c] {
            if !self.in_region(x, tol) {
                return bad("point outside R");
            }
        }
        let a = self.k.foot(&self.c);
        let (ab, bc, ac) = (a.distance(&self.b), self.b.distance(&self.c), a.distance(&self.c));
        if (ab + bc - ac).abs() > 1e3 * tol || ab <= tol || bc <= tol {
            return bad("b is not inside the segment ac");
        }
        if (self.k.signed_distance(&self.big_b) - self.k.signed_distance(&self.b)).abs() > 1e3 * tol {
            return bad("B and b are at different distances from k");
        }
        if (self.l.signed_distance(&self.big_c) - self.l.signed_distance(&self.c)).abs() > 1e3 * tol {
            return bad("C and c are at different distances from l");
        }
        let bcl = HLine::through(&self.b, &self.c).ok_or(HyperbolicError::DegenerateInput("b = c".into()))?;
        let ends = [super::hyperboloid::intersection(&self.m, &self.k), super::hyperboloid::intersection(&self.m, &self.l)];
        let [Some(mk), Some(ml)] = ends else { return bad("m does not meet k and l") };
        let (sk, sl) = (bcl.signed_distance(&mk), bcl.signed_distance(&ml));
        if sk * sl <= 0.0 {
            return bad("line bc meets m");
        }
        let side = -sk.signum();
        if side * bcl.signed_distance(&self.big_b) < -tol || side * bcl.signed_distance(&self.big_c) < -tol {
            return bad("B or C on the side of bc facing m");
        }
        Ok(bc <= self.big_b.distance(&self.big_c) + tol)
    }

    /// Whether `C` is at least as far from `k` as `c`, so the hypercycle of
    /// `k` through `c` crosses the segment `BC`. The stated hypotheses do
    /// not imply this and the inequality can fail without it.
    pub fn crosses_c_hypercycle(&self) -> bool {
        self.k.signed_distance(&self.big_c) >= self.k.signed_distance(&self.c)
    }
}

/// The region with `m` on the real axis between `-s` and `s` and `R` above it.
pub fn region_lines(s: f64) -> (HLine, HLine, HLine) {
    let (c, h) = (s.cosh(), s.sinh());
    let k = HLine { n: Vec3::new(c, 0.0, -h) };
    let l = HLine { n: Vec3::new(-c, 0.0, -h) };
    let m = HLine { n: Vec3::new(0.0, 1.0, 0.0) };
    (k, l, m)
}

/// Random valid region-flow configuration and the number of rejected draws.
pub fn random_region_flow<R: Rng + ?Sized>(rng: &mut R) -> (RegionFlow, usize) {
    let mut rejected = 0;
    loop {
        let s = rng.random_range(0.2..1.5);
        let (k, l, m) = region_lines(s);
        let r = rng.random_range(0.0..0.97);
        let t = rng.random_range(0.0..PI);
        let Some(c) = HPoint::from_poincare(num_complex::Complex64::from_polar(r, t)) else { continue };
        let a = k.foot(&c);
        let b = a.lerp(&c, rng.random_range(0.05..0.95));
        let big_b = hypercycle_point(&k, k.signed_distance(&b), k.coordinate(&b) + rng.random_range(-2.5..2.5));
        let big_c = hypercycle_point(&l, l.signed_distance(&c), l.coordinate(&c) + rng.random_range(-2.5..2.5));
        let cfg = RegionFlow { k, l, m, b, c, big_b, big_c };
        if cfg.check(1e-9).is_ok() {
            return (cfg, rejected);
        }
        rejected += 1;
    }
}

/// Golden-section minimization on `[lo, hi]`, to interval width `tol`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    [lo, mid, hi].into_iter().min_by(|x, y| f(*x).total_cmp(&f(*y))).unwrap()
}

/// The segment `a b` parameterized by arc length, with its line.
struct Segment {
    a: HPoint,
    dir: Vec3,
    len: f64,
    line: HLine,
}

impl Segment {
    fn new(a: &HPoint, b: &HPoint) -> Segment {
        let dir = a.direction_to(b).expect("distinct endpoints");
        Segment { a: *a, dir, len: a.distance(b), line: HLine::from_point_tangent(a, &dir) }
    }

    fn at(&self, t: f64) -> HPoint {
        self.a.exp(&self.dir, t)
    }

    /// Angle at `x` (on the segment) between the segment and the geodesic to `y`.
    fn angle_to(&self, x: &HPoint, y: &HPoint) -> f64 {
        match x.direction_to(y) {
            Some(d) => angle_between(x, &self.line.tangent_at(x), &d),
            None => FRAC_PI_2,
        }
    }
}

/// Angle at which the numerically shortest path from vertex `j` meets
/// edge `e` of a polygon laid out by its positions.
pub fn containment_vertex_angle(p: &GreenBlackPolygon, e: usize, j: usize) -> f64 {
    let pts = p.positions();
    let n = pts.len();
    let seg = Segment::new(&pts[e], &pts[(e + 1) % n]);
    let y = pts[j];
    let t = golden_section(|t| seg.at(t).distance(&y), 0.0, seg.len, 1e-10);
    seg.angle_to(&seg.at(t), &y)
}

/// Angles at which the numerically shortest path between edges `e` and `f`
/// meets each of them.
pub fn containment_edge_angles(p: &GreenBlackPolygon, e: usize, f: usize) -> (f64, f64) {
    let pts = p.positions();
    let n = pts.len();
    let s1 = Segment::new(&pts[e], &pts[(e + 1) % n]);
    let s2 = Segment::new(&pts[f], &pts[(f + 1) % n]);
    let inner = |x: &HPoint| golden_section(|u| x.distance(&s2.at(u)), 0.0, s2.len, 1e-10);
    let t = golden_section(|t| {
        let x = s1.at(t);
        x.distance(&s2.at(inner(&x)))
    }, 0.0, s1.len, 1e-10);
    let x = s1.at(t);
    let y = s2.at(inner(&x));
    (s1.angle_to(&x, &y), s2.angle_to(&y, &x))
}

/// Worst deviation from a right angle over all containment checks of a
/// polygon: every green edge against every vertex not on it, and every
/// pair of green edges.
pub fn containment_worst(p: &GreenBlackPolygon) -> f64 {
    let n = p.len();
    let greens: Vec<usize> = (0..n).filter(|&i| p.edges[i].color == Color::Green).collect();
    let mut worst: f64 = 0.0;
    for &e in &greens {
        for j in (0..n).filter(|&j| j != e && j != (e + 1) % n) {
            worst = worst.max((containment_vertex_angle(p, e, j) - FRAC_PI_2).abs());
        }
        for &f in greens.iter().filter(|&&f| f > e) {
            let (a, b) = containment_edge_angles(p, e, f);
            worst = worst.max((a - FRAC_PI_2).abs()).max((b - FRAC_PI_2).abs());
        }
    }
    worst
}

/// Oriented line at distance `rho` from the origin, perpendicular to the
/// direction `phi`, with the origin on its left.
pub fn line_facing_origin(phi: f64, rho: f64) -> HLine {
    let u = Vec3::new(phi.cos(), phi.sin(), 0.0);
    let o = HPoint::origin().0;
    HLine { n: -(u * rho.cosh() + o * rho.sinh()) }
}

/// Random proper green-black polygon cut out by lines around the origin,
/// with the number of rejected draws.
pub fn random_greenblack<R: Rng + ?Sized>(rng: &mut R, min_lines: usize, max_lines: usize) -> (GreenBlackPolygon, Vec<HLine>, usize) {
    let mut rejected = 0;
    loop {
        let n = rng.random_range(min_lines..=max_lines);
        let mut phis: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
        phis.sort_by(f64::total_cmp);
        let lines: Vec<HLine> = phis.iter().map(|&p| line_facing_origin(p, rng.random_range(0.2..1.8))).collect();
        match greenblack_from_hyperideal(&lines, 1e-9) {
            Ok(p) => return (p, lines, rejected),
            Err(_) => rejected += 1,
        }
    }
}

/// A relaxed polygon: green edges replaced by segments joining points
/// pushed outward along the black support lines, so the angles where green
/// meets black drop below a right angle. `None` if the result is not
/// convex or an angle exceeds a right angle.
pub fn relax<R: Rng + ?Sized>(rng: &mut R, p: &GreenBlackPolygon) -> Option<GreenBlackPolygon> {
    let n = p.len();
    let pts = p.positions();
    let mut moved = pts.clone();
    for i in 0..n {
        if p.edges[i].color != Color::Green {
            continue;
        }
        let (s, e) = (i, (i + 1) % n);
        let prev = (i + n - 1) % n;
        let next = (e + 1) % n;
        // Extend the black edge into s beyond s, and the one out of e before e.
        let d0 = pts[prev].direction_to(&pts[s])?;
        let t0 = pts[prev].distance(&pts[s]) + rng.random_range(0.0..0.3);
        moved[s] = pts[prev].exp(&d0, t0);
        let d1 = pts[next].direction_to(&pts[e])?;
        let t1 = pts[next].distance(&pts[e]) + rng.random_range(0.0..0.3);
        moved[e] = pts[next].exp(&d1, t1);
    }
    let mut q = p.clone();
    for i in 0..n {
        q.vertices[i].position = Some(moved[i]);
        q.edges[i].length = moved[i].distance(&moved[(i + 1) % n]);
    }
    for i in 0..n {
        let a = moved[i].angle(&moved[(i + 1) % n], &moved[(i + n - 1) % n]);
        q.vertices[i].angle = a;
        if q.vertices[i].color == Color::Black && a > FRAC_PI_2 + 1e-12 {
            return None;
        }
    }
    super::polygon::klein_convex(&moved, 1e-12).then_some(q)
}

/// Regular polygon with `n` black edges of length `len`; all vertices green.
pub fn regular_polygon(n: usize, len: f64) -> Result<GreenBlackPolygon> {
    // cosh(len / 2) sin(angle / 2) = cos(pi / n)
    let angle = 2.0 * ((PI / n as f64).cos() / (0.5 * len).cosh()).asin();
    GreenBlackPolygon::from_data(&vec![(Color::Black, len); n], &vec![(Color::Green, angle); n])
}

/// Right-angled `2n`-gon alternating black edges of length `black` with
/// green edges, with `n`-fold rotational symmetry.
pub fn alternating_right_polygon(n: usize, black: f64) -> Result<GreenBlackPolygon> {
    // Lambert quadrilateral from the center: cos(pi / n) = sinh(a / 2) sinh(b / 2).
    let green = 2.0 * ((PI / n as f64).cos() / (0.5 * black).sinh()).asinh();
    let edges: Vec<(Color, f64)> = (0..n).flat_map(|_| [(Color::Black, black), (Color::Green, green)]).collect();
    GreenBlackPolygon::from_data(&edges, &vec![(Color::Black, FRAC_PI_2); 2 * n])
}

/// Black-edge-congruent flex of a polygon: green variable `pivot` changes
/// by `delta` and the green variables `free` re-close it.
pub fn flexed_pair(p: &GreenBlackPolygon, pivot: ElementRef, delta: f64, free: [ElementRef; 3]) -> Result<GreenBlackPolygon> {
    super::polygon::flex(p, pivot, delta, free)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteStats {
    pub trials: usize,
    pub violations: usize,
    pub rejected: usize,
    pub worst: f64,
}
