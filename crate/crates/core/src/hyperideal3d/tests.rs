use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cpoly::{check_consistent_orientation, Convexity, OrientationCase};
use crate::hyperbolic::Color;
use crate::inversive::{classify_pair, inv_dist, MoebiusMap};

const FIXTURES: [Fixture; 5] = [
    Fixture::Cube { a: 0.8 },
    Fixture::Cube { a: 0.65 },
    Fixture::Octahedron { s: 1.2 },
    Fixture::Dodecahedron { r: 1.15 },
    Fixture::Icosahedron { r: 1.1 },
];

fn fixture(fx: Fixture) -> ConvexPolyhedron3 {
    generate_fixture(&fx, 7, 1e-9).unwrap()
}

/// Independent properness test in the Klein model: the truncated face
/// polygon keeps every truncation point on the inner side of the polar
/// plane of each other vertex of the face.
fn klein_proper(p: &ConvexPolyhedron3, f: usize) -> bool {
    let face = &p.faces[f];
    let k = face.len();
    let (n, d) = p.face_plane(f);
    let mut points = Vec::new();
    for i in 0..k {
        let (ia, ib) = (face[i], face[(i + 1) % k]);
        let (a, b) = (p.vertex(ia), p.vertex(ib));
        if p.edge_distance(ia, ib) < 1.0 {
            for (w, x) in [(a, ia), (b, ib)] {
                // point of the line a b on the polar plane of w
                let t = (1.0 - w.dot(&a)) / w.dot(&(b - a));
                points.push((a + (b - a) * t, [ia, ib, x]));
            }
        } else {
            let m = nalgebra::Matrix3::from_rows(&[n.transpose(), a.transpose(), b.transpose()]);
            let x = m.lu().solve(&Vec3::new(d, 1.0, 1.0)).unwrap();
            points.push((x, [ia, ib, ib]));
        }
    }
    points.iter().all(|(x, own)| face.iter().filter(|c| !own.contains(c)).all(|&c| x.dot(&p.vertex(c)) <= 1.0 + 1e-12))
}

#[test]
fn support_circle_examples() {
    let c = support_circle(&Vec3::x(), 0.8).unwrap().to_cap();
    assert!((c.center - Vec3::x()).norm() < 1e-15);
    assert!((c.radius - 0.8f64.acos()).abs() < 1e-15);
    assert!((c.radius - 0.6435).abs() < 1e-4);
    assert!((support_circle(&Vec3::z(), 0.0).unwrap().to_cap().radius - FRAC_PI_2).abs() < 1e-15);
    assert_eq!(support_circle(&Vec3::z(), 1.0), Err(Hyper3Error::PlaneMissesBall(1.0)));

    let a: f64 = 0.8;
    let x = support_circle(&Vec3::x(), a).unwrap();
    let y = support_circle(&Vec3::y(), a).unwrap();
    let mx = support_circle(&-Vec3::x(), a).unwrap();
    assert!((inv_dist(&x, &y) - 16.0 / 9.0).abs() < 1e-12);
    assert!((inv_dist(&x, &mx) - 41.0 / 9.0).abs() < 1e-12);
}

#[test]
fn tangency_circle_examples() {
    let c = tangency_circle(&Vec3::new(2.0, 0.0, 0.0), 1e-9).unwrap().to_cap();
    assert!((c.center - Vec3::x()).norm() < 1e-15);
    assert!((c.radius - FRAC_PI_3).abs() < 1e-15);
    let v = Vec3::new(0.8, 0.8, 0.8);
    let r = tangency_circle(&v, 1e-9).unwrap().to_cap().radius;
    assert!((r - (1.0 / (0.8 * 3f64.sqrt())).acos()).abs() < 1e-15);
    assert!((r - 0.76456).abs() < 1e-5);
    assert!(matches!(tangency_circle(&Vec3::new(0.5, 0.0, 0.0), 1e-9), Err(Hyper3Error::VertexInsideBall(_))));

    for fx in FIXTURES {
        let p = fixture(fx);
        let a = p.combinatorics();
        for v in 0..p.vertices.len() {
            let t = tangency_circle(&p.vertex(v), 1e-9).unwrap();
            for (f, _) in a.star(v) {
                let (n, d) = p.face_plane(f);
                assert!(inv_dist(&t, &support_circle(&n, d).unwrap()).abs() < 1e-10, "{fx:?} v{v} f{f}");
            }
        }
    }
}

#[test]
fn classification_examples() {
    let c = classify_strictly_hyperideal(&fixture(Fixture::Cube { a: 0.8 }), 1e-9).unwrap();
    assert!(c.strictly_hyperideal && c.non_unitary);
    assert_eq!(c.regime, EdgeRegime::AllMiss);
    assert_eq!(c.edges.len(), 12);

    let c = classify_strictly_hyperideal(&fixture(Fixture::Cube { a: 0.65 }), 1e-9).unwrap();
    assert!(c.strictly_hyperideal && c.non_unitary);
    assert_eq!(c.regime, EdgeRegime::AllMeet);

    let cube = fixture(Fixture::Cube { a: 0.8 });
    let unit = cube.scaled(0.5f64.sqrt() / 0.8);
    let c = classify_strictly_hyperideal(&unit, 1e-9).unwrap();
    assert!(c.strictly_hyperideal);
    assert!(!c.non_unitary);
    assert!(c.edges.iter().all(|e| e.1 == EdgeRelation::Tangent));
    assert!(matches!(dual_cpolyhedron(&unit, 1e-9), Err(Hyper3Error::Unitary(..))));

    let shrunk = cube.scaled(0.5 / 0.8);
    let c = classify_strictly_hyperideal(&shrunk, 1e-9).unwrap();
    assert!(!c.strictly_hyperideal);
    assert!(c.vertex_outside.iter().all(|&b| !b));
    assert_eq!(dual_cpolyhedron(&shrunk, 1e-9), Err(Hyper3Error::NotStrictlyHyperideal));

    let mut dented = cube.clone();
    dented.vertices[0] = [0.1, 0.1, 0.1];
    assert!(matches!(classify_strictly_hyperideal(&dented, 1e-9), Err(Hyper3Error::NotConvex(_))));
}

#[test]
fn polyhedron_measurements() {
    let cube = fixture(Fixture::Cube { a: 0.8 });
    for f in 0..6 {
        let (n, d) = cube.face_plane(f);
        assert!((d - 0.8).abs() < 1e-12);
        assert!((n.abs().max() - 1.0).abs() < 1e-12);
        assert!((cube.face_distance(f) - 0.8).abs() < 1e-12);
    }
    for (u, v) in cube.combinatorics().edges() {
        assert!((cube.edge_distance(u, v) - 0.8 * 2f64.sqrt()).abs() < 1e-12);
    }
    // A face plane that meets the ball away from its polygon.
    let slab = ConvexPolyhedron3 {
        vertices: vec![[2.0, 2.0, 0.5], [3.0, 2.0, 0.5], [2.0, 3.0, 0.5]],
        faces: vec![vec![0, 1, 2]],
    };
    assert!((slab.face_distance(0) - (8.0f64 + 0.25).sqrt()).abs() < 1e-12);
}

#[test]
fn generator_examples() {
    let cube = fixture(Fixture::Cube { a: 0.8 });
    assert_eq!(cube.vertices.len(), 8);
    assert!(cube.vertices.iter().all(|v| v.iter().all(|x| (x.abs() - 0.8).abs() < 1e-12)));
    assert!(matches!(generate_fixture(&Fixture::Cube { a: 0.5 }, 0, 1e-9), Err(Hyper3Error::ParamsOutOfRange(_))));
    assert!(matches!(generate_fixture(&Fixture::RandomHull { points: 3 }, 0, 1e-9), Err(Hyper3Error::ParamsOutOfRange(_))));
    let counts = [(Fixture::Octahedron { s: 1.2 }, 6, 8), (Fixture::Dodecahedron { r: 1.15 }, 20, 12), (Fixture::Icosahedron { r: 1.1 }, 12, 20)];
    for (fx, v, f) in counts {
        let p = fixture(fx);
        assert_eq!((p.vertices.len(), p.faces.len()), (v, f), "{}", fx.kind_name());
    }
    let a = generate_fixture(&Fixture::RandomHull { points: 8 }, 42, 1e-9).unwrap();
    let b = generate_fixture(&Fixture::RandomHull { points: 8 }, 42, 1e-9).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.vertices.len(), 8);
    assert_ne!(a, generate_fixture(&Fixture::RandomHull { points: 8 }, 43, 1e-9).unwrap());
    let json = serde_json::to_string(&Fixture::Cube { a: 0.8 }).unwrap();
    assert_eq!(json, r#"{"kind":"cube","a":0.8}"#);
}

#[test]
fn convex_hull_of_cube_corners() {
    let mut pts: Vec<Vec3> = (0..8).map(|i| Vec3::new((i & 1) as f64, (i >> 1 & 1) as f64, (i >> 2 & 1) as f64)).collect();
    pts.push(Vec3::new(0.5, 0.5, 0.5));
    let h = convex_hull(&pts, 1e-9).unwrap();
    assert_eq!(h.vertices.len(), 8);
    assert_eq!(h.faces.len(), 6);
    assert!(h.faces.iter().all(|f| f.len() == 4));
    h.validate(1e-9).unwrap();
    let flat: Vec<Vec3> = (0..5).map(|i| Vec3::new(i as f64, (i * i) as f64, 0.0)).collect();
    assert!(convex_hull(&flat, 1e-9).is_err());
}

#[test]
fn dual_of_fixtures() {
    for fx in FIXTURES {
        let p = fixture(fx);
        let cp = dual_cpolyhedron(&p, 1e-9).unwrap();
        assert_eq!(cp.base.vertex_count(), p.faces.len());
        assert_eq!(cp.base.faces.len(), p.vertices.len());
        assert!(cp.base.validate().is_empty());
        assert_eq!(cp.convexity, Convexity::Convex, "{fx:?}");
        assert_eq!(check_consistent_orientation(&cp), OrientationCase::CaseI, "{fx:?}");
        assert!(cp.planarity_residual() < 1e-10);
        assert!(tangency_agreement(&p, &cp, 1e-9).unwrap() < 1e-9);
        for (u, v) in cp.base.edges() {
            let c = classify_pair(&cp.circles[u], &cp.circles[v], 1e-9);
            assert!(c.uncoupled && c.non_unitary);
        }
        for v in 0..cp.base.vertex_count() {
            assert!(c_link(&cp, v).unwrap().is_proper(), "{fx:?} vertex {v}");
        }
    }
}

#[test]
fn dual_link_colors_follow_edge_regime() {
    let bb1 = dual_cpolyhedron(&fixture(Fixture::Cube { a: 0.8 }), 1e-9).unwrap();
    let bb2 = dual_cpolyhedron(&fixture(Fixture::Cube { a: 0.65 }), 1e-9).unwrap();
    for v in 0..6 {
        let p1 = c_link(&bb1, v).unwrap().polygon.unwrap();
        assert_eq!(p1.green_edge_count(), 0);
        assert!(p1.vertices.iter().all(|x| x.color == Color::Green));
        let p2 = c_link(&bb2, v).unwrap().polygon.unwrap();
        assert_eq!(p2.green_edge_count(), 4);
        assert!(p2.vertices.iter().all(|x| x.color == Color::Black));
    }
}

#[test]
fn dual_is_moebius_equivariant() {
    let p = fixture(Fixture::Icosahedron { r: 1.1 });
    let cp = dual_cpolyhedron(&p, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let t = MoebiusMap::random(&mut rng);
        let moved = cp.transformed(&t).unwrap();
        assert!(moved.is_convex());
        assert_eq!(check_consistent_orientation(&moved), OrientationCase::CaseI);
        for f in 0..cp.base.faces.len() {
            let image = t.apply_circle(&cp.face_ortho[f]).lorentz();
            assert!((image - moved.face_ortho[f].lorentz()).norm() < 1e-8);
        }
    }
}

#[test]
fn link_properness_matches_klein_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut proper, mut improper) = (0, 0);
    for points in [6, 8, 10] {
        for _ in 0..30 {
            let p = generate_fixture(&Fixture::RandomHull { points }, rng.random(), 1e-9).unwrap();
            let cp = dual_cpolyhedron(&p, 1e-9).unwrap();
            for v in 0..cp.base.vertex_count() {
                let l = c_link(&cp, v).unwrap();
                assert_eq!(l.is_proper(), klein_proper(&p, v), "hull {p:?} dual vertex {v}");
                if l.is_proper() {
                    proper += 1;
                } else {
                    improper += 1;
                }
            }
        }
    }
    assert!(proper > 0 && improper > 0);
    for fx in FIXTURES {
        let p = fixture(fx);
        assert!((0..p.faces.len()).all(|f| klein_proper(&p, f)));
    }
}

#[test]
fn proper_random_hulls() {
    for seed in 0..5 {
        let (p, _) = proper_random_hull(8, seed, 1e-9).unwrap();
        let cp = dual_cpolyhedron(&p, 1e-9).unwrap();
        assert!((0..cp.base.vertex_count()).all(|v| c_link(&cp, v).unwrap().is_proper()));
        assert_eq!(proper_random_hull(8, seed, 1e-9).unwrap().0, p);
    }
}
