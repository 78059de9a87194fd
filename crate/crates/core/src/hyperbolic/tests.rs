use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::inversive::{random_circle, ExtComplex, MoebiusMap, Vec3};

fn unit_line(n: Vec3) -> OrientedLine {
    DiskModel::unit().line_of(&HLine::from_normal(n).unwrap())
}

#[test]
fn acos_theta_examples() {
    assert_eq!(acos_theta(-1.0), ComplexAngle::real(PI));
    assert_eq!(acos_theta(1.0), ComplexAngle::real(0.0));
    assert!((acos_theta(0.0).value - FRAC_PI_2).abs() < 1e-15);
    let a = acos_theta(2.0);
    assert_eq!(a.branch, Branch::Imaginary);
    assert!((a.value - 1.3169578969248166).abs() < 1e-12);
    for k in -100..=100 {
        let r = k as f64 / 10.0;
        assert!((cos_theta(&acos_theta(r)) - r).abs() < 1e-12 * (1.0 + r.abs()));
    }
}

#[test]
fn complex_angle_examples() {
    let x = unit_line(Vec3::new(1.0, 0.0, 0.0));
    // A line with itself bounds a lune of angle pi, its reversal one of angle 0.
    assert!((complex_angle(&x, &x).value - PI).abs() < 1e-7);
    let xr = unit_line(Vec3::new(-1.0, 0.0, 0.0));
    assert_eq!(complex_angle(&x, &xr).branch, Branch::Real);
    assert!(complex_angle(&x, &xr).value.abs() < 1e-7);
    let (c1, s1) = (1f64.cosh(), 1f64.sinh());
    let y = unit_line(Vec3::new(-c1, 0.0, -s1));
    let a = complex_angle(&x, &y);
    assert_eq!(a.branch, Branch::Imaginary);
    assert!((a.value - 1.0).abs() < 1e-10);
    let (ch, sh) = (0.5f64.cosh(), 0.5f64.sinh());
    let z = unit_line(Vec3::new(ch, 0.0, sh));
    let b = complex_angle(&x, &z);
    assert_eq!(b.branch, Branch::PhaseShifted);
    assert!((b.value - 0.5).abs() < 1e-10);
    assert!((crate::inversive::inv_dist(&x.carrier, &z.carrier) + 1.1276259652063807).abs() < 1e-10);
    // Lines through the origin whose normals differ by pi / 3 bound a lune
    // of angle 2 pi / 3.
    let w = unit_line(Vec3::new(FRAC_PI_3.cos(), FRAC_PI_3.sin(), 0.0));
    assert!((complex_angle(&x, &w).value - 2.0 * FRAC_PI_3).abs() < 1e-10);
    assert!((complex_angle(&w, &x).value - 2.0 * FRAC_PI_3).abs() < 1e-10);
}

#[test]
fn unit_disk_distance() {
    let m = DiskModel::unit();
    let o = ExtComplex::finite(0.0, 0.0).to_sphere();
    let q = ExtComplex::finite(0.5f64.tanh(), 0.0).to_sphere();
    assert!(hyp_distance(&m, &o, &o).unwrap().abs() < 1e-12);
    assert!((hyp_distance(&m, &o, &q).unwrap() - 1.0).abs() < 1e-12);
    let outside = ExtComplex::finite(2.0, 0.0).to_sphere();
    assert_eq!(hyp_distance(&m, &o, &outside), Err(HyperbolicError::PointOnBoundary));
}

/// A sphere point inside the companion disk of `c`.
fn point_inside(rng: &mut ChaCha8Rng, m: &DiskModel) -> Vec3 {
    loop {
        let q = crate::inversive::random_sphere_point(rng);
        if let Ok(x) = m.point(&q) {
            if x.0.z < 20.0 {
                return q;
            }
        }
    }
}

#[test]
fn distance_is_moebius_invariant_in_any_disk() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let c = random_circle(&mut rng, 0.3, PI - 0.3);
        let m = DiskModel::new(c);
        let (p, q) = (point_inside(&mut rng, &m), point_inside(&mut rng, &m));
        let d = m.distance(&p, &q).unwrap();
        assert!((m.distance(&q, &p).unwrap() - d).abs() < 1e-10);
        let g = MoebiusMap::random(&mut rng);
        let m2 = DiskModel::new(g.apply_circle(&c));
        let d2 = m2.distance(&g.apply_sphere(&p), &g.apply_sphere(&q)).unwrap();
        assert!((d - d2).abs() < 1e-8 * (1.0 + d), "{d} vs {d2}");
    }
}

#[test]
fn carriers_of_lines_are_orthogonal_to_the_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let c = random_circle(&mut rng, 0.3, PI - 0.3);
        let m = DiskModel::new(c);
        let (p, q) = (m.point(&point_inside(&mut rng, &m)).unwrap(), m.point(&point_inside(&mut rng, &m)).unwrap());
        let l = m.line_through(&p, &q).unwrap();
        assert!(crate::inversive::inv_dist(&l.carrier, &c).abs() < 1e-9);
        let back = m.line(&l.carrier, 1e-9).unwrap();
        assert!((back.line.n - l.line.n).norm() < 1e-8 * (1.0 + l.line.n.norm()));
    }
}

fn ultra_parallel_pair(rng: &mut ChaCha8Rng) -> (HLine, HLine) {
    let a = line_facing_origin(rng.random_range(0.0..TAU), rng.random_range(0.5..2.0));
    let b = line_facing_origin(rng.random_range(0.0..TAU), rng.random_range(0.5..2.0));
    if -mink(&a.n, &b.n) > 1.05 { (a, b) } else { ultra_parallel_pair(rng) }
}

use rand::Rng;

#[test]
fn common_perpendicular_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = DiskModel::unit();
    for _ in 0..100 {
        let (a, b) = ultra_parallel_pair(&mut rng);
        let (la, lb) = (m.line_of(&a), m.line_of(&b));
        let (p, q) = common_perpendicular(&la, &lb, 1e-12).unwrap();
        assert!(a.contains_point(&p, 1e-10) && b.contains_point(&q, 1e-10));
        assert!((p.distance(&q) - complex_angle(&la, &lb).value).abs() < 1e-9);
        let d = p.direction_to(&q).unwrap();
        assert!((angle_between(&p, &a.tangent_at(&p), &d) - FRAC_PI_2).abs() < 1e-9);
        let e = q.direction_to(&p).unwrap();
        assert!((angle_between(&q, &b.tangent_at(&q), &e) - FRAC_PI_2).abs() < 1e-9);
        // Equivariance under an isometry of the disk.
        let g = m.translate_along_line(&m.line_of(&line_facing_origin(1.0, 0.3)), 0.7);
        let img = |l: &OrientedLine| m.line(&g.apply_circle(&l.carrier), 1e-9).unwrap();
        let (p2, q2) = common_perpendicular(&img(&la), &img(&lb), 1e-12).unwrap();
        let gp = m.point(&g.apply_sphere(&m.sphere_point(&p))).unwrap();
        let gq = m.point(&g.apply_sphere(&m.sphere_point(&q))).unwrap();
        assert!(gp.distance(&p2) < 1e-8 && gq.distance(&q2) < 1e-8);
    }
    let x = m.line_of(&HLine { n: Vec3::new(1.0, 0.0, 0.0) });
    let y = m.line_of(&HLine { n: Vec3::new(0.0, 1.0, 0.0) });
    assert_eq!(common_perpendicular(&x, &y, 1e-12), Err(HyperbolicError::LinesIntersect));
}

#[test]
fn translation_along_a_line() {
    let m = DiskModel::unit();
    let l = m.line_of(&line_facing_origin(0.4, 0.8));
    assert!(m.translate_along_line(&l, 0.0).projective_distance(&MoebiusMap::identity()) < 1e-15);
    let g = m.translate_along_line(&l, 0.9);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let x = l.line.point_at(rng.random_range(-2.0..2.0));
        let gx = m.point(&g.apply_sphere(&m.sphere_point(&x))).unwrap();
        assert!(l.line.contains_point(&gx, 1e-10));
        assert!((l.line.coordinate(&gx) - l.line.coordinate(&x) - 0.9).abs() < 1e-10);
        let y = HPoint::from_poincare(num_complex::Complex64::from_polar(rng.random_range(0.0..0.9), rng.random_range(0.0..TAU))).unwrap();
        let gy = m.point(&g.apply_sphere(&m.sphere_point(&y))).unwrap();
        assert!((l.line.signed_distance(&gy) - l.line.signed_distance(&y)).abs() < 1e-10);
    }
    for (s, t) in [(0.3, 0.5), (-1.0, 0.2), (1.5, -1.5)] {
        let a = m.translate_along_line(&l, s).compose(&m.translate_along_line(&l, t));
        assert!(a.projective_distance(&m.translate_along_line(&l, s + t)) < 1e-10);
    }
}

fn symmetric_triangle(rho: f64) -> Vec<HLine> {
    (0..3).map(|k| line_facing_origin(k as f64 * TAU / 3.0, rho)).collect()
}

#[test]
fn truncated_triangle_is_right_angled_hexagon() {
    let lines = symmetric_triangle(1.0);
    assert_eq!(is_proper_hyperideal(&lines, 1e-9), Properness::Proper);
    let p = greenblack_from_hyperideal(&lines, 1e-9).unwrap();
    assert_eq!(p.len(), 6);
    assert_eq!(p.pattern().iter().filter(|&&c| c == Color::Green).count(), 3);
    assert!(p.vertices.iter().all(|v| v.color == Color::Black && (v.angle - FRAC_PI_2).abs() < 1e-12));
    for w in p.edges.chunks(2) {
        assert_ne!(w[0].color, w[1].color);
    }
    // Symmetric right-angled hexagon: cosh b = cosh a / (cosh a - 1).
    let green = p.edges.iter().find(|e| e.color == Color::Green).unwrap().length;
    let black = p.edges.iter().find(|e| e.color == Color::Black).unwrap().length;
    assert!((black.cosh() - green.cosh() / (green.cosh() - 1.0)).abs() < 1e-9);
    assert!(validate_greenblack(&p, 1e-9).is_empty());
    assert!(p.closure_error() < 1e-9);
}

#[test]
fn crossing_lines_give_ordinary_polygon() {
    let lines: Vec<HLine> = (0..4).map(|k| line_facing_origin(k as f64 * FRAC_PI_2, 0.3)).collect();
    let p = greenblack_from_hyperideal(&lines, 1e-9).unwrap();
    assert_eq!(p.green_edge_count(), 0);
    assert_eq!(p.len(), 4);
    assert!(p.vertices.iter().all(|v| v.color == Color::Green));
    assert!(validate_greenblack(&p, 1e-9).is_empty());
}

#[test]
fn mixed_six_lines_green_count() {
    let rhos = [1.8, 1.8, 0.9, 0.9, 1.8, 1.8];
    let lines: Vec<HLine> = rhos.iter().enumerate().map(|(k, &r)| line_facing_origin(k as f64 * FRAC_PI_3, r)).collect();
    let ultra = (0..6).filter(|&i| -mink(&lines[i].n, &lines[(i + 1) % 6].n) > 1.0).count();
    assert!(ultra > 0 && ultra < 6);
    let p = greenblack_from_hyperideal(&lines, 1e-9).unwrap();
    assert_eq!(p.green_edge_count(), ultra);
    assert!(validate_greenblack(&p, 1e-9).is_empty());
}

#[test]
fn improper_unbounded() {
    let mut lines = symmetric_triangle(0.3);
    assert_eq!(is_proper_hyperideal(&lines, 1e-9), Properness::Proper);
    lines[1] = lines[1].reversed();
    assert_eq!(is_proper_hyperideal(&lines, 1e-9), Properness::Improper(Improper::Unbounded { line: 1 }));
}

#[test]
fn improper_vertex_outside() {
    let lines = vec![line_facing_origin(0.0, 1.0), line_facing_origin(2.0 * FRAC_PI_3, 1.0), line_facing_origin(FRAC_PI_3, 0.5)];
    assert_eq!(
        is_proper_hyperideal(&lines, 1e-9),
        Properness::Improper(Improper::VertexOutside { junction: 0, line: 2 })
    );
    let tangent = vec![HLine { n: Vec3::new(1.0, 0.0, 0.0) }, HLine { n: Vec3::new(-1.0, 0.0, 0.0) }, line_facing_origin(1.0, 0.5)];
    assert!(matches!(greenblack_from_hyperideal(&tangent, 1e-9), Err(HyperbolicError::IdealVertex(0)) | Err(HyperbolicError::NotProper(_))));
}

#[test]
fn ideal_vertex_rejected() {
    // Two lines sharing the ideal point 1.
    let a = HLine { n: Vec3::new(0.0, 1.0, 0.0) };
    let b = HLine { n: Vec3::new(1.0, 1.0, 1.0) };
    let c = line_facing_origin(-FRAC_PI_2, 0.2);
    let lines = [a, b, c];
    let c01 = -mink(&lines[0].n, &lines[1].n);
    assert!((c01.abs() - 1.0).abs() < 1e-12, "{c01}");
    assert!(matches!(is_proper_hyperideal(&lines, 1e-9), Properness::Improper(Improper::IdealVertex { junction: 0 })));
}

#[test]
fn validate_negatives() {
    let p = greenblack_from_hyperideal(&symmetric_triangle(1.0), 1e-9).unwrap();
    let mut q = p.clone();
    // Recolor a black edge next to a green edge.
    let i = (0..6).find(|&i| q.edges[i].color == Color::Black).unwrap();
    q.edges[i].color = Color::Green;
    let v = validate_greenblack(&q, 1e-9);
    assert!(v.iter().any(|x| x.rule == Rule::GreenEdgeNeighbors && x.element == ElementRef::Edge(i)));
    let mut r = p.clone();
    r.vertices[2].angle = FRAC_PI_2 + 10.0 * 1e-6;
    let v = validate_greenblack(&r, 1e-6);
    assert!(v.iter().any(|x| x.rule == Rule::BlackRightAngle && x.element == ElementRef::Vertex(2)));
}

#[test]
fn serde_round_trip() {
    let p = greenblack_from_hyperideal(&symmetric_triangle(1.0), 1e-9).unwrap();
    let s = serde_json::to_string(&p).unwrap();
    let q: GreenBlackPolygon = serde_json::from_str(&s).unwrap();
    assert_eq!(p.len(), q.len());
    for (a, b) in p.vertices.iter().zip(&q.vertices) {
        assert!((a.angle - b.angle).abs() < 1e-12);
        assert!(a.position.unwrap().distance(&b.position.unwrap()) < 1e-9);
    }
    let manual = r#"{"elements":[{"edge":{"color":"black","length":1.0}},{"vertex":{"color":"green","angle":{"branch":"real","value":1.0}}},
        {"edge":{"color":"black","length":1.0}},{"vertex":{"color":"green","angle":{"branch":"real","value":1.0}}},
        {"edge":{"color":"black","length":1.0}},{"vertex":{"color":"green","angle":{"branch":"real","value":1.0}}}]}"#;
    let t: GreenBlackPolygon = serde_json::from_str(manual).unwrap();
    assert_eq!(t.len(), 3);
    assert!(serde_json::from_str::<GreenBlackPolygon>(&manual.replace("\"elements\"", "\"open\":true,\"elements\"")).is_err());
}

#[test]
fn regular_fixtures_close() {
    let p = regular_polygon(5, 1.0).unwrap();
    assert!(p.closure_error() < 1e-12);
    assert!(validate_greenblack(&p, 1e-9).is_empty());
    let q = alternating_right_polygon(4, 0.8).unwrap();
    assert!(q.closure_error() < 1e-10);
    assert!(validate_greenblack(&q, 1e-9).is_empty());
}

#[test]
fn four_vertex_identity_and_congruence() {
    let p = regular_polygon(5, 1.0).unwrap();
    let r = four_vertex_labels(&p, &p, 1e-9).unwrap();
    assert_eq!(r.sign_changes, 0);
    assert!(r.labels.iter().all(|l| l.1 == Sign::None));
    // Same data laid out after an isometry: rotate the starting vertex.
    let mut q = p.clone();
    q.vertices.rotate_left(0);
    for v in q.vertices.iter_mut() {
        v.position = None;
    }
    assert_eq!(four_vertex_labels(&p, &q, 1e-9).unwrap().sign_changes, 0);
    let mut bad = p.clone();
    bad.edges[0].length += 0.1;
    assert!(matches!(four_vertex_labels(&p, &bad, 1e-9), Err(HyperbolicError::NotBlackEdgeCongruent(_))));
}

#[test]
fn four_vertex_flex_fixtures() {
    // Cauchy quadrilateral: all green vertices.
    let p = regular_polygon(4, 1.0).unwrap();
    let v = ElementRef::Vertex;
    let q = flex(&p, v(0), 0.05, [v(1), v(2), v(3)]).unwrap();
    assert!(validate_greenblack(&q, 1e-9).is_empty());
    assert!(four_vertex_labels(&p, &q, 1e-9).unwrap().sign_changes >= 4);
    // Right-angled octagon: all green edges.
    let p = alternating_right_polygon(4, 0.8).unwrap();
    let e = ElementRef::Edge;
    let q = flex(&p, e(1), 0.05, [e(3), e(5), e(7)]).unwrap();
    assert!(validate_greenblack(&q, 1e-9).is_empty());
    assert!(four_vertex_labels(&p, &q, 1e-9).unwrap().sign_changes >= 4);
}

#[test]
fn four_vertex_on_random_flexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 100 {
        let (p, _, _) = random_greenblack(&mut rng, 4, 8);
        let greens: Vec<ElementRef> = p.green_elements().iter().map(|g| g.0).collect();
        if greens.len() < 4 {
            continue;
        }
        let k = rng.random_range(0..greens.len());
        let pick: Vec<ElementRef> = (1..4).map(|j| greens[(k + j * greens.len() / 4) % greens.len()]).collect();
        let Ok(q) = flex(&p, greens[k], rng.random_range(-0.05..0.05), [pick[0], pick[1], pick[2]]) else { continue };
        if !validate_greenblack(&q, 1e-7).is_empty() {
            continue;
        }
        let r = four_vertex_labels(&p, &q, 1e-9).unwrap();
        assert!(r.sign_changes >= 4, "{r:?}");
        done += 1;
    }
}

#[test]
fn random_greenblack_valid_and_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut total_rejected = 0;
    for _ in 0..60 {
        let (p, _, rej) = random_greenblack(&mut rng, 3, 7);
        total_rejected += rej;
        assert!(validate_greenblack(&p, 1e-9).is_empty());
        assert!(containment_worst(&p) < 1e-6);
    }
    assert!(total_rejected < 60 * 200);
}

#[test]
fn relaxed_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut done = 0;
    while done < 30 {
        let (p, _, _) = random_greenblack(&mut rng, 3, 7);
        if p.green_edge_count() == 0 {
            continue;
        }
        let Some(q) = relax(&mut rng, &p) else { continue };
        assert!(containment_worst(&q) < 1e-6);
        done += 1;
    }
}

#[test]
fn hypercycle_examples() {
    let l = line_facing_origin(0.3, 0.7);
    let p = HPoint::from_poincare(num_complex::Complex64::new(0.1, 0.2)).unwrap();
    let q = l.coordinate(&l.foot(&p));
    let delta = 0.4;
    for d in [delta, -delta] {
        let h = hypercycle_point(&l, d, q);
        assert!((l.signed_distance(&h) - d).abs() < 1e-12);
    }
    let offsets: Vec<f64> = (1..20).map(|k| k as f64 * 0.1).collect();
    assert!(hypercycle_monotonicity_check(&l, delta, &p, &offsets).unwrap());
    let neg: Vec<f64> = offsets.iter().map(|t| -t).collect();
    assert!(hypercycle_monotonicity_check(&l, delta, &p, &neg).unwrap());
    assert!(hypercycle_monotonicity_check(&l, delta, &p, &[0.1, -0.2]).is_err());
    // At the foot the two sides agree.
    let a = p.distance(&hypercycle_point(&l, delta, q + 0.3));
    let b = p.distance(&hypercycle_point(&l, delta, q - 0.3));
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn hypercycle_random_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..500 {
        let l = line_facing_origin(rng.random_range(0.0..TAU), rng.random_range(0.0..1.5));
        let p = HPoint::from_poincare(num_complex::Complex64::from_polar(rng.random_range(0.0..0.9), rng.random_range(0.0..TAU))).unwrap();
        let delta = rng.random_range(-2.0..2.0);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mut offs: Vec<f64> = (0..8).map(|_| rng.random_range(1e-3..3.0)).collect();
        offs.sort_by(f64::total_cmp);
        offs.dedup();
        let offs: Vec<f64> = offs.iter().map(|t| sign * t).collect();
        assert!(hypercycle_monotonicity_check(&l, delta, &p, &offs).unwrap());
    }
}

#[test]
fn region_flow_equality_and_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let (cfg, _) = random_region_flow(&mut rng);
    let eq = RegionFlow { big_b: cfg.b, big_c: cfg.c, ..cfg };
    assert!(eq.check(1e-9).unwrap());
    assert!((eq.b.distance(&eq.c) - eq.big_b.distance(&eq.big_c)).abs() < 1e-12);
    let mut checked = 0;
    while checked < 500 {
        let (cfg, _) = random_region_flow(&mut rng);
        if cfg.crosses_c_hypercycle() {
            assert!(cfg.check(1e-9).unwrap());
            checked += 1;
        }
    }
    let bad = RegionFlow { m: line_facing_origin(1.0, 0.1), ..cfg };
    assert!(matches!(bad.check(1e-9), Err(HyperbolicError::HypothesisViolated(_))));
}

#[test]
fn region_flow_counterexample() {
    // Satisfies every stated hypothesis, but C is closer to k than c is.
    let v = |x: f64, y: f64, z: f64| Vec3::new(x, y, z);
    let (k, l, m) = region_lines(1.7418940612000477f64.acosh());
    let cfg = RegionFlow {
        k,
        l,
        m,
        b: HPoint(v(-0.06288725483443747, 0.5699589879780362, 1.1527393698479962)),
        c: HPoint(v(2.743702834643709, 3.5363569393744343, 4.586253988550311)),
        big_b: HPoint(v(-0.17121195628007158, 0.7886743659761012, 1.2850372716466456)),
        big_c: HPoint(v(1.4596375474851335, 2.4449674669763195, 3.0180138642161696)),
    };
    assert!(!cfg.crosses_c_hypercycle());
    assert_eq!(cfg.check(1e-9), Ok(false));
    assert!((cfg.b.distance(&cfg.c) - 1.9079194557796).abs() < 1e-9);
    assert!((cfg.big_b.distance(&cfg.big_c) - 1.4253580181249).abs() < 1e-9);
}

fn bgb_chain(g: f64) -> GreenBlackChain {
    arm_chain_build(&[0.8, 0.9], &[g], &[], &[Color::Black, Color::Green, Color::Black]).unwrap()
}

#[test]
fn arm_chain_examples() {
    let c = bgb_chain(0.5);
    for k in 0..2 {
        let i = k + 1;
        let a = c.points[i].angle(&c.points[i - 1], &c.points[i + 1]);
        assert!((a - FRAC_PI_2).abs() < 1e-9);
    }
    let all_black = arm_chain_build(&[1.0, 1.0, 1.0], &[], &[2.0, 2.0], &[Color::Black; 3]).unwrap();
    assert!(all_black.is_convex(1e-12));
    // Reflection symmetry of the input sequence.
    let fwd = arm_chain_build(&[0.3, 0.7, 1.1, 0.4], &[], &[2.0, 2.5, 1.9], &[Color::Black; 4]).unwrap();
    let rev = arm_chain_build(&[0.4, 1.1, 0.7, 0.3], &[], &[1.9, 2.5, 2.0], &[Color::Black; 4]).unwrap();
    assert!((fwd.free_distance() - rev.free_distance()).abs() < 1e-12);
    assert!(matches!(
        arm_chain_build(&[1.0, 1.0, 1.0], &[], &[0.3, 0.3], &[Color::Black; 3]),
        Err(HyperbolicError::NonConvex)
    ));
}

#[test]
fn arm_lemma_examples() {
    let c = bgb_chain(0.5);
    let v = arm_lemma_check(&c, &c, 1e-9).unwrap();
    assert!(v.consistent && v.equal);
    let longer = bgb_chain(0.7);
    let v = arm_lemma_check(&c, &longer, 1e-9).unwrap();
    assert!(v.consistent && !v.equal && v.distance < v.distance_prime);
    assert!(matches!(arm_lemma_check(&longer, &c, 1e-9), Err(HyperbolicError::HypothesisViolated(_))));
    let other = arm_chain_build(&[0.8, 0.9], &[], &[2.0], &[Color::Black; 2]).unwrap();
    assert_eq!(arm_lemma_check(&c, &other, 1e-9), Err(HyperbolicError::Incompatible));
}

#[test]
fn arm_lemma_random_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut rejected = 0;
    for _ in 0..500 {
        let (a, b, rej) = random_arm_pair(&mut rng);
        rejected += rej;
        let v = arm_lemma_check(&a, &b, 1e-9).unwrap();
        assert!(v.consistent, "{v:?}");
    }
    assert!(rejected < 500 * 1000);
}

#[test]
fn svg_output() {
    let p = greenblack_from_hyperideal(&symmetric_triangle(1.0), 1e-9).unwrap();
    let s = svg::polygon_svg(&p);
    assert!(s.starts_with("<svg") && s.contains("viewBox=\"-1.1 -1.1 2.2 2.2\""));
    assert_eq!(s.matches("<polyline").count(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_round_trip(branch in 0usize..3, v in 0.0f64..5.0) {
        let a = match branch {
            0 => ComplexAngle::imaginary(v + 1e-3),
            1 => ComplexAngle::real(v * PI / 5.0),
            _ => ComplexAngle::phase_shifted(v + 1e-3),
        };
        let b = acos_theta(cos_theta(&a));
        prop_assert!(a.deviation(&b) < 1e-9);
    }

    #[test]
    fn complex_angle_symmetric_and_equivariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circle(&mut rng, 0.3, PI - 0.3);
        let m = DiskModel::new(c);
        let pts: Vec<HPoint> = (0..4).map(|_| m.point(&point_inside(&mut rng, &m)).unwrap()).collect();
        let l1 = m.line_through(&pts[0], &pts[1]).unwrap();
        let l2 = m.line_through(&pts[2], &pts[3]).unwrap();
        let a = complex_angle(&l1, &l2);
        prop_assert!(a.deviation(&complex_angle(&l2, &l1)) < 1e-7);
        let g = MoebiusMap::random(&mut rng);
        let m2 = DiskModel::new(g.apply_circle(&c));
        let i1 = m2.line(&g.apply_circle(&l1.carrier), 1e-7).unwrap();
        let i2 = m2.line(&g.apply_circle(&l2.carrier), 1e-7).unwrap();
        prop_assert!(a.deviation(&complex_angle(&i1, &i2)) < 1e-6);
    }

    #[test]
    fn arm_monotone_in_green_data(seed in any::<u64>(), bump in 0.0f64..0.4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _, _) = random_arm_pair(&mut rng);
        let pattern = a.pattern();
        let blacks: Vec<f64> = a.edges.iter().filter(|e| e.0 == Color::Black).map(|e| e.1).collect();
        let mut greens: Vec<f64> = a.edges.iter().filter(|e| e.0 == Color::Green).map(|e| e.1).collect();
        let mut angles: Vec<f64> = (0..a.angles.len()).filter(|&k| a.vertex_color(k) == Color::Green).map(|k| a.angles[k]).collect();
        let slots = greens.len() + angles.len();
        prop_assume!(slots > 0);
        let k = rng.random_range(0..slots);
        if k < greens.len() { greens[k] += bump } else { let j = k - greens.len(); angles[j] = (angles[j] + bump).min(PI - 1e-3) }
        if let Ok(b) = arm_chain_build(&blacks, &greens, &angles, &pattern) {
            prop_assert!(b.free_distance() >= a.free_distance() - 1e-9);
        }
    }

    #[test]
    fn greenblack_output_validates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, _, _) = random_greenblack(&mut rng, 3, 9);
        prop_assert!(validate_greenblack(&p, 1e-9).is_empty());
    }

    #[test]
    fn translations_form_a_group(s in -2.0f64..2.0, t in -2.0f64..2.0, phi in 0.0f64..TAU, rho in 0.0f64..1.5) {
        let m = DiskModel::unit();
        let l = m.line_of(&line_facing_origin(phi, rho));
        let a = m.translate_along_line(&l, s).compose(&m.translate_along_line(&l, t));
        prop_assert!(a.projective_distance(&m.translate_along_line(&l, s + t)) < 1e-9);
    }
}
