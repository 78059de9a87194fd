use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::Serialize;

use super::hyperboloid::{Frame, HPoint};
use super::polygon::{klein_convex, Color};
use super::{HyperbolicError, Result};

/// Open chain `p_1 ... p_n` beginning and ending with black edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenBlackChain {
    /// Edge `i` joins `points[i]` and `points[i + 1]`.
    pub edges: Vec<(Color, f64)>,
    /// Interior angles at `points[1] ... points[n - 2]`.
    pub angles: Vec<f64>,
    pub points: Vec<HPoint>,
}

impl GreenBlackChain {
    /// Turtle layout from the origin along the positive real axis, turning
    /// left at each interior vertex.
    pub fn layout(edges: Vec<(Color, f64)>, angles: Vec<f64>) -> Result<GreenBlackChain> {
        if edges.is_empty() || angles.len() + 1 != edges.len() {
            return Err(HyperbolicError::DegenerateInput("a chain of k edges needs k - 1 interior angles".into()));
        }
        let mut f = Frame::identity();
        let mut points = vec![f.position()];
        for (i, &(_, len)) in edges.iter().enumerate() {
            f = f.advance(len);
            points.push(f.position());
            if let Some(a) = angles.get(i) {
                f = f.turn(PI - a);
            }
        }
        Ok(GreenBlackChain { edges, angles, points })
    }

    pub fn free_distance(&self) -> f64 {
        self.points[0].distance(self.points.last().unwrap())
    }

    pub fn pattern(&self) -> Vec<Color> {
        self.edges.iter().map(|e| e.0).collect()
    }

    /// Color of interior vertex `k` (at `points[k + 1]`).
    pub fn vertex_color(&self, k: usize) -> Color {
        if self.edges[k].0 == Color::Green || self.edges[k + 1].0 == Color::Green {
            Color::Black
        } else {
            Color::Green
        }
    }

    /// Whether closing the chain with the segment `p_n p_1` gives a convex
    /// polygon.
    pub fn is_convex(&self, tol: f64) -> bool {
        self.points.len() >= 3 && klein_convex(&self.points, tol)
    }
}

/// Lays out a chain from its color pattern; lengths and green-vertex angles
/// are consumed in order and every vertex on a green edge is a right angle.
pub fn arm_chain_build(black_lengths: &[f64], green_lengths: &[f64], green_vertex_angles: &[f64], pattern: &[Color]) -> Result<GreenBlackChain> {
    if pattern.first() != Some(&Color::Black) || pattern.last() != Some(&Color::Black) {
        return Err(HyperbolicError::DegenerateInput("chains begin and end with black edges".into()));
    }
    if pattern.windows(2).any(|w| w[0] == Color::Green && w[1] == Color::Green) {
        return Err(HyperbolicError::DegenerateInput("adjacent green edges".into()));
    }
    let (mut bi, mut gi, mut ai) = (0, 0, 0);
    let mut edges = Vec::with_capacity(pattern.len());
    for &c in pattern {
        let src = if c == Color::Black { &mut bi } else { &mut gi };
        let list = if c == Color::Black { black_lengths } else { green_lengths };
        let len = *list.get(*src).ok_or(HyperbolicError::DegenerateInput("too few lengths".into()))?;
        if !(len > 0.0) {
            return Err(HyperbolicError::DegenerateInput(format!("non-positive length {len}")));
        }
        *src += 1;
        edges.push((c, len));
    }
    let mut angles = Vec::with_capacity(pattern.len() - 1);
    for w in pattern.windows(2) {
        if w[0] == Color::Green || w[1] == Color::Green {
            angles.push(FRAC_PI_2);
        } else {
            let a = *green_vertex_angles.get(ai).ok_or(HyperbolicError::DegenerateInput("too few angles".into()))?;
            if !(a > 0.0 && a < PI) {
                return Err(HyperbolicError::DegenerateInput(format!("angle {a} outside (0, pi)")));
            }
            ai += 1;
            angles.push(a);
        }
    }
    let chain = GreenBlackChain::layout(edges, angles)?;
    if !chain.is_convex(1e-12) {
        return Err(HyperbolicError::NonConvex);
    }
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArmVerdict {
    pub consistent: bool,
    /// Free-vertex distances agree within `1e-7`.
    pub equal: bool,
    pub distance: f64,
    pub distance_prime: f64,
}

/// Evaluates the arm inequality `|p_1 p_n| <= |p'_1 p'_n|` after checking
/// the hypotheses: compatible, black-edge congruent, convex, green lengths
/// and angles of `c` at most those of `c_prime`, other angles equal, and a
/// right angle at the start of every green edge.
pub fn arm_lemma_check(c: &GreenBlackChain, c_prime: &GreenBlackChain, tol: f64) -> Result<ArmVerdict> {
    if c.pattern() != c_prime.pattern() {
        return Err(HyperbolicError::Incompatible);
    }
    let bad = |why: &str| Err(HyperbolicError::HypothesisViolated(why.into()));
    for (e, f) in c.edges.iter().zip(&c_prime.edges) {
        match e.0 {
            Color::Black if (e.1 - f.1).abs() > tol => return bad("black edges differ"),
            Color::Green if e.1 > f.1 + tol => return bad("green edge longer in the first chain"),
            _ => {}
        }
    }
    for k in 0..c.angles.len() {
        let (a, b) = (c.angles[k], c_prime.angles[k]);
        match c.vertex_color(k) {
            Color::Green if a > b + tol => return bad("green angle larger in the first chain"),
            Color::Black if (a - b).abs() > tol => return bad("black angles differ"),
            _ => {}
        }
        for ch in [c, c_prime] {
            if ch.edges[k + 1].0 == Color::Green && (ch.angles[k] - FRAC_PI_2).abs() > tol {
                return bad("green edge does not start at a right angle");
            }
        }
    }
    if !c.is_convex(tol) || !c_prime.is_convex(tol) {
        return bad("chain is not convex");
    }
    let (d, dp) = (c.free_distance(), c_prime.free_distance());
    Ok(ArmVerdict { consistent: d <= dp + tol, equal: (d - dp).abs() <= 1e-7, distance: d, distance_prime: dp })
}

/// Random pattern of `k` edges with black ends and no adjacent greens.
pub fn random_pattern<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Color> {
    let mut p = vec![Color::Black; k];
    for i in 1..k.saturating_sub(1) {
        if p[i - 1] == Color::Black && rng.random_bool(0.4) {
            p[i] = Color::Green;
        }
    }
    if k >= 2 && p[k - 2] == Color::Green {
        p[k - 1] = Color::Black;
    }
    p
}

/// A pair of chains satisfying the arm lemma hypotheses, with the green
/// data of the second grown by random amounts. Returns the pair and the
/// number of rejected draws.
pub fn random_arm_pair<R: Rng + ?Sized>(rng: &mut R) -> (GreenBlackChain, GreenBlackChain, usize) {
    let mut rejected = 0;
    loop {
        let k = rng.random_range(3..8);
        let pattern = random_pattern(rng, k);
        let blacks: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.2)).collect();
        let greens: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
        let angles: Vec<f64> = (0..k).map(|_| rng.random_range(1.7..3.0)).collect();
        let greens2: Vec<f64> = greens.iter().map(|g| g + rng.random_range(0.0..0.5)).collect();
        let angles2: Vec<f64> = angles.iter().map(|a| (a + rng.random_range(0.0..0.3)).min(PI - 0.02)).collect();
        match (
            arm_chain_build(&blacks, &greens, &angles, &pattern),
            arm_chain_build(&blacks, &greens2, &angles2, &pattern),
        ) {
            (Ok(a), Ok(b)) => return (a, b, rejected),
            _ => rejected += 1,
        }
    }
}
