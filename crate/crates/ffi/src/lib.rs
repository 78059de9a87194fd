//! C interface to circlepoly. Objects are opaque handles owned by the
//! caller and released with the matching `_free` function. Every fallible
//! call returns a `CpStatus`; on failure `cp_last_error` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use circlepoly::cpoly::{c_link, normalize_orientation, CPolyhedron};
use circlepoly::hyperideal3d::{dual_cpolyhedron, generate_fixture, Fixture};
use circlepoly::inversive::{inv_dist, Complex64, MoebiusMap, OrientedCircle, SphericalCap, Vec3};
use circlepoly::io::{congruence, validate, CPolyFile, IoError, ValidationReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or unknown fields.
    ParseError = 3,
    /// Well-formed input that does not describe a valid object.
    InvalidInput = 4,
    /// The operation needs inputs that pass every check.
    ValidationFailed = 5,
    GeometryError = 6,
    Panic = 7,
}

/// A circle polyhedron with its validation report.
pub struct CpPolyhedron {
    cp: CPolyhedron,
    report: ValidationReport,
}

/// An orientation-preserving Moebius map.
pub struct CpMap {
    map: MoebiusMap,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(CpStatus, String);

impl Failure {
    fn new(status: CpStatus, msg: impl ToString) -> Failure {
        Failure(status, msg.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        let status = match e {
            IoError::Parse { .. } | IoError::Version { .. } => CpStatus::ParseError,
            _ => CpStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, recording its error message and turning panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CpStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(CpStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(s, what)?;
    CStr::from_ptr(s).to_str().map_err(|e| Failure::new(CpStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn string_out(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|e| Failure::new(CpStatus::InvalidInput, e))
}

fn boxed(cp: CPolyhedron, tol: f64) -> Box<CpPolyhedron> {
    let report = validate(cp.base.clone(), cp.circles.clone(), tol);
    Box::new(CpPolyhedron { cp, report })
}

/// Message for the last failed call on this thread. Valid until the next
/// call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads a circle polyhedron file. The handle is produced whenever the
/// circles assemble, even if some checks fail; see `cp_polyhedron_is_valid`.
///
/// # Safety
/// `json` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_from_json(json: *const c_char, tol: f64, out: *mut *mut CpPolyhedron) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let (base, circles) = CPolyFile::parse("<input>", text(json, "json")?)?.resolve()?;
        let report = validate(base, circles, tol);
        let cp = report.cpolyhedron.clone().ok_or_else(|| {
            Failure::new(CpStatus::ValidationFailed, serde_json::to_string(&report).unwrap_or_default())
        })?;
        *out = Box::into_raw(Box::new(CpPolyhedron { cp, report }));
        Ok(())
    })
}

/// Dual circle polyhedron of a fixture given as JSON, for example
/// `{"kind": "cube", "a": 0.8}`.
///
/// # Safety
/// `fixture` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_from_fixture(
    fixture: *const c_char,
    seed: u64,
    tol: f64,
    out: *mut *mut CpPolyhedron,
) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let fx: Fixture = serde_json::from_str(text(fixture, "fixture")?).map_err(|e| Failure::new(CpStatus::ParseError, e))?;
        let p = generate_fixture(&fx, seed, tol).map_err(|e| Failure::new(CpStatus::InvalidInput, e))?;
        let cp = dual_cpolyhedron(&p, tol).map_err(|e| Failure::new(CpStatus::GeometryError, e))?;
        *out = Box::into_raw(boxed(cp, tol));
        Ok(())
    })
}

/// # Safety
/// `p` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_free(p: *mut CpPolyhedron) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_vertex_count(p: *const CpPolyhedron) -> usize {
    p.as_ref().map_or(0, |p| p.cp.base.vertex_count())
}

/// Whether every validation check passed.
///
/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_is_valid(p: *const CpPolyhedron) -> bool {
    p.as_ref().is_some_and(|p| p.report.passed)
}

/// The validation report as JSON; free with `cp_string_free`.
///
/// # Safety
/// `p` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_report(p: *const CpPolyhedron, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = p.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "polyhedron is null"))?;
        *out = string_out(serde_json::to_string(&p.report).map_err(|e| Failure::new(CpStatus::Panic, e))?)?;
        Ok(())
    })
}

/// The circle polyhedron in file format; free with `cp_string_free`.
///
/// # Safety
/// `p` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_to_json(p: *const CpPolyhedron, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = p.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "polyhedron is null"))?;
        let file = CPolyFile::from_cpolyhedron(&p.cp);
        *out = string_out(serde_json::to_string(&file).map_err(|e| Failure::new(CpStatus::Panic, e))?)?;
        Ok(())
    })
}

/// Image of a circle polyhedron under a map, revalidated.
///
/// # Safety
/// `p` and `map` are live handles and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_transformed(
    p: *const CpPolyhedron,
    map: *const CpMap,
    out: *mut *mut CpPolyhedron,
) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = p.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "polyhedron is null"))?;
        let m = map.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "map is null"))?;
        let cp = p.cp.transformed(&m.map).map_err(|e| Failure::new(CpStatus::GeometryError, e))?;
        *out = Box::into_raw(boxed(cp, p.cp.tol));
        Ok(())
    })
}

/// The c-link at a vertex as JSON: `{"proper": bool, "properness": ...,
/// "polygon": ... | null}`. An improper link is not an error.
///
/// # Safety
/// `p` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_polyhedron_link(p: *const CpPolyhedron, vertex: usize, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = p.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "polyhedron is null"))?;
        let cp = normalize_orientation(&p.cp).unwrap_or_else(|_| p.cp.clone());
        let link = c_link(&cp, vertex).map_err(|e| Failure::new(CpStatus::InvalidInput, e))?;
        let v = json!({ "proper": link.is_proper(), "properness": link.properness, "polygon": link.polygon });
        *out = string_out(v.to_string())?;
        Ok(())
    })
}

/// Map `z -> (az + b) / (cz + d)` from `coeffs = [re a, im a, re b, im b,
/// re c, im c, re d, im d]`.
///
/// # Safety
/// `coeffs` points to 8 doubles and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_map_new(coeffs: *const f64, out: *mut *mut CpMap) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(coeffs, "coeffs")?;
        let c = std::slice::from_raw_parts(coeffs, 8);
        let z = |k: usize| Complex64::new(c[2 * k], c[2 * k + 1]);
        let map = MoebiusMap::new(z(0), z(1), z(2), z(3)).map_err(|e| Failure::new(CpStatus::InvalidInput, e))?;
        *out = Box::into_raw(Box::new(CpMap { map }));
        Ok(())
    })
}

/// A random map drawn from `seed`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_map_random(seed: u64, out: *mut *mut CpMap) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let map = MoebiusMap::random(&mut ChaCha8Rng::seed_from_u64(seed));
        *out = Box::into_raw(Box::new(CpMap { map }));
        Ok(())
    })
}

/// Writes the normalized coefficients (`ad - bc = 1`) in the layout of
/// `cp_map_new`.
///
/// # Safety
/// `map` is a live handle and `out` points to 8 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_map_coefficients(map: *const CpMap, out: *mut f64) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let m = map.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "map is null"))?;
        let flat: Vec<f64> = m.map.coefficients().iter().flatten().copied().collect();
        ptr::copy_nonoverlapping(flat.as_ptr(), out, 8);
        Ok(())
    })
}

/// # Safety
/// `m` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cp_map_free(m: *mut CpMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Decides whether a Moebius map carries `a` onto `b`. Both must be valid.
/// `map_out` receives the map when congruent and null otherwise;
/// `report_out` receives the JSON report. Either may be null.
///
/// # Safety
/// `a` and `b` are live handles, `congruent` is writable, and the optional
/// outputs are null or writable.
#[no_mangle]
pub unsafe extern "C" fn cp_congruence(
    a: *const CpPolyhedron,
    b: *const CpPolyhedron,
    tol: f64,
    congruent: *mut bool,
    map_out: *mut *mut CpMap,
    report_out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        non_null(congruent, "congruent")?;
        let a = a.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "first polyhedron is null"))?;
        let b = b.as_ref().ok_or_else(|| Failure::new(CpStatus::NullPointer, "second polyhedron is null"))?;
        for (side, p) in [("first", a), ("second", b)] {
            if !p.report.passed {
                return Err(Failure::new(CpStatus::ValidationFailed, format!("{side} polyhedron fails validation")));
            }
        }
        let c = congruence(&a.cp, &b.cp, tol).map_err(|e| Failure::new(CpStatus::GeometryError, e))?;
        *congruent = c.congruent;
        if !map_out.is_null() {
            *map_out = c.map.map_or(ptr::null_mut(), |map| Box::into_raw(Box::new(CpMap { map })));
        }
        if !report_out.is_null() {
            *report_out = string_out(c.report.to_string())?;
        }
        Ok(())
    })
}

/// Inversive distance of two oriented circles given as caps
/// `[x, y, z, radius]` with center direction `(x, y, z)`.
///
/// # Safety
/// `a` and `b` point to 4 doubles and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_inv_dist_caps(a: *const f64, b: *const f64, out: *mut f64) -> CpStatus {
    guard(|| {
        non_null(out, "out")?;
        let circle = |p: *const f64, what: &str| -> Result<OrientedCircle, Failure> {
            non_null(p, what)?;
            let s = std::slice::from_raw_parts(p, 4);
            let cap = SphericalCap::new(Vec3::new(s[0], s[1], s[2]), s[3]).map_err(|e| Failure::new(CpStatus::InvalidInput, e))?;
            Ok(OrientedCircle::from_cap(&cap))
        };
        *out = inv_dist(&circle(a, "a")?, &circle(b, "b")?);
        Ok(())
    })
}
