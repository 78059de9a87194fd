use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use circlepoly_ffi::*;
use serde_json::{json, Value};

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> Value {
    let v = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
    cp_string_free(s);
    v
}

unsafe fn last_error() -> String {
    CStr::from_ptr(cp_last_error()).to_string_lossy().into_owned()
}

unsafe fn fixture(json: &str) -> *mut CpPolyhedron {
    let mut p = ptr::null_mut();
    assert_eq!(cp_polyhedron_from_fixture(cstr(json).as_ptr(), 7, 1e-9, &mut p), CpStatus::Ok, "{}", last_error());
    p
}

#[test]
fn fixture_round_trips_through_json() {
    unsafe {
        let p = fixture(r#"{"kind": "cube", "a": 0.8}"#);
        assert!(cp_polyhedron_is_valid(p));
        assert_eq!(cp_polyhedron_vertex_count(p), 6);

        let mut s = ptr::null_mut();
        assert_eq!(cp_polyhedron_to_json(p, &mut s), CpStatus::Ok);
        let text = CString::new(take_string(s).to_string()).unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(cp_polyhedron_from_json(text.as_ptr(), 1e-9, &mut q), CpStatus::Ok);
        assert!(cp_polyhedron_is_valid(q));

        let mut congruent = false;
        let mut map = ptr::null_mut();
        assert_eq!(cp_congruence(p, q, 1e-9, &mut congruent, &mut map, ptr::null_mut()), CpStatus::Ok);
        assert!(congruent);
        let mut c = [0.0; 8];
        assert_eq!(cp_map_coefficients(map, c.as_mut_ptr()), CpStatus::Ok);
        // recovered map is the identity up to sign
        let s = c[0].signum();
        for (x, want) in c.iter().zip([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]) {
            assert!((x - s * want).abs() < 1e-6, "{c:?}");
        }
        cp_map_free(map);
        cp_polyhedron_free(q);
        cp_polyhedron_free(p);
    }
}

#[test]
fn congruence_recovers_random_map() {
    unsafe {
        let p = fixture(r#"{"kind": "octahedron", "s": 1.2}"#);
        let mut m = ptr::null_mut();
        assert_eq!(cp_map_random(11, &mut m), CpStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(cp_polyhedron_transformed(p, m, &mut q), CpStatus::Ok);

        let mut congruent = false;
        let mut found = ptr::null_mut();
        let mut report = ptr::null_mut();
        assert_eq!(cp_congruence(p, q, 1e-9, &mut congruent, &mut found, &mut report), CpStatus::Ok);
        assert!(congruent);
        assert_eq!(take_string(report)["verdict"], "congruent");

        let (mut want, mut got) = ([0.0; 8], [0.0; 8]);
        cp_map_coefficients(m, want.as_mut_ptr());
        cp_map_coefficients(found, got.as_mut_ptr());
        let s = if want[0] * got[0] + want[1] * got[1] >= 0.0 { 1.0 } else { -1.0 };
        for (w, g) in want.iter().zip(got) {
            assert!((w - s * g).abs() < 1e-6, "{want:?} vs {got:?}");
        }
        cp_map_free(found);
        cp_map_free(m);
        cp_polyhedron_free(q);
        cp_polyhedron_free(p);
    }
}

#[test]
fn different_cubes_are_not_congruent() {
    unsafe {
        let p = fixture(r#"{"kind": "cube", "a": 0.8}"#);
        let q = fixture(r#"{"kind": "cube", "a": 0.79}"#);
        let mut congruent = true;
        let mut map = ptr::null_mut();
        assert_eq!(cp_congruence(p, q, 1e-9, &mut congruent, &mut map, ptr::null_mut()), CpStatus::Ok);
        assert!(!congruent);
        assert!(map.is_null());
        cp_polyhedron_free(q);
        cp_polyhedron_free(p);
    }
}

#[test]
fn failing_input_keeps_report() {
    let dirs = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    let theta = (-1.0f64 / 3.0).acos();
    let mut circles = serde_json::Map::new();
    for (i, c) in dirs.iter().enumerate() {
        let r = if i == 1 { theta - 0.6 } else { 0.6 };
        circles.insert(i.to_string(), json!({ "cap": { "center": c, "radius": r } }));
    }
    let file = json!({
        "format_version": 1,
        "polyhedron": { "vertices": [0, 1, 2, 3], "faces": [[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]] },
        "circles": circles,
    });
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(cp_polyhedron_from_json(cstr(&file.to_string()).as_ptr(), 1e-9, &mut p), CpStatus::Ok);
        assert!(!cp_polyhedron_is_valid(p));
        let mut s = ptr::null_mut();
        assert_eq!(cp_polyhedron_report(p, &mut s), CpStatus::Ok);
        let r = take_string(s);
        assert_eq!(r["passed"], false);
        let unitary = r["checks"].as_array().unwrap().iter().find(|c| c["check"] == "non_unitary").unwrap();
        assert_eq!(unitary["status"], "fail");

        let mut congruent = false;
        assert_eq!(cp_congruence(p, p, 1e-9, &mut congruent, ptr::null_mut(), ptr::null_mut()), CpStatus::ValidationFailed);
        assert!(last_error().contains("fails validation"));
        cp_polyhedron_free(p);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(cp_polyhedron_from_json(ptr::null(), 1e-9, &mut p), CpStatus::NullPointer);
        assert_eq!(cp_polyhedron_from_json(cstr("{").as_ptr(), 1e-9, &mut p), CpStatus::ParseError);
        assert!(!last_error().is_empty());
        assert_eq!(
            cp_polyhedron_from_json(cstr(r#"{"format_version": 9, "polyhedron": {"vertices": [], "faces": []}, "circles": {}}"#).as_ptr(), 1e-9, &mut p),
            CpStatus::ParseError
        );
        let bad = [0xffu8, 0];
        assert_eq!(cp_polyhedron_from_json(bad.as_ptr().cast(), 1e-9, &mut p), CpStatus::InvalidUtf8);
        assert_eq!(
            cp_polyhedron_from_fixture(cstr(r#"{"kind": "cube", "a": 0.5}"#).as_ptr(), 0, 1e-9, &mut p),
            CpStatus::InvalidInput
        );
        assert!(p.is_null());

        let mut m = ptr::null_mut();
        assert_eq!(cp_map_new([0.0; 8].as_ptr(), &mut m), CpStatus::InvalidInput);
        assert_eq!(cp_polyhedron_vertex_count(ptr::null()), 0);
        assert!(!cp_polyhedron_is_valid(ptr::null()));
        cp_polyhedron_free(ptr::null_mut());
        cp_map_free(ptr::null_mut());
        cp_string_free(ptr::null_mut());

        let q = fixture(r#"{"kind": "cube", "a": 0.8}"#);
        let mut s = ptr::null_mut();
        assert_eq!(cp_polyhedron_link(q, 99, &mut s), CpStatus::InvalidInput);
        assert_eq!(cp_polyhedron_link(q, 0, &mut s), CpStatus::Ok);
        assert_eq!(take_string(s)["proper"], true);
        cp_polyhedron_free(q);
    }
}

#[test]
fn map_coefficients_are_normalized() {
    unsafe {
        let mut m = ptr::null_mut();
        // z -> 2z + 1
        assert_eq!(cp_map_new([2.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0].as_ptr(), &mut m), CpStatus::Ok);
        let mut c = [0.0; 8];
        cp_map_coefficients(m, c.as_mut_ptr());
        let det = (c[0] * c[6] - c[1] * c[7]) - (c[2] * c[4] - c[3] * c[5]);
        assert!((det - 1.0).abs() < 1e-12, "{c:?}");
        assert!((c[0] / c[6] - 2.0).abs() < 1e-12);
        cp_map_free(m);
    }
}

#[test]
fn inv_dist_of_caps() {
    unsafe {
        let a = [0.0, 0.0, 1.0, 0.5];
        let b = [0.0, 0.0, -1.0, 0.5];
        let mut d = 0.0;
        assert_eq!(cp_inv_dist_caps(a.as_ptr(), a.as_ptr(), &mut d), CpStatus::Ok);
        assert!((d + 1.0).abs() < 1e-12, "{d}");
        assert_eq!(cp_inv_dist_caps(a.as_ptr(), b.as_ptr(), &mut d), CpStatus::Ok);
        assert!(d.is_finite());
        let bad = [0.0, 0.0, 0.0, 0.5];
        assert_eq!(cp_inv_dist_caps(bad.as_ptr(), a.as_ptr(), &mut d), CpStatus::InvalidInput);
    }
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../include/circlepoly.h")).unwrap()
}

#[test]
fn header_declares_every_export() {
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let h = header();
    let names: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(names.len() >= 15, "{names:?}");
    for n in names {
        assert!(h.contains(&format!("{n}(")), "{n} missing from header");
    }
    for v in ["CP_STATUS_OK = 0", "CP_STATUS_PANIC = 7", "typedef struct CpPolyhedron CpPolyhedron;"] {
        assert!(h.contains(v), "{v}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let main = dir.path().join("main.c");
    std::fs::write(&main, "#include \"circlepoly.h\"\nint main(void) { return cp_last_error() == 0; }\n").unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../include");
    let out = Command::new(cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(&include).arg(&main).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Option<&'static str> {
    ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}
