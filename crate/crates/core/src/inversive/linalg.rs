use nalgebra::DMatrix;

use super::{Vec3, Vec4};

/// The Lorentz form `x1 y1 + x2 y2 + x3 y3 - x4 y4`.
#[inline]
pub fn eta(a: &Vec4, b: &Vec4) -> f64 {
    a.x * b.x + a.y * b.y + a.z * b.z - a.w * b.w
}

/// Singular values in descending order with the matching right singular
/// vectors. Always returns four of each: short inputs are padded with zero rows.
pub struct SortedSvd {
    pub values: [f64; 4],
    pub vectors: [Vec4; 4],
}

impl SortedSvd {
    pub fn of_rows(rows: &[Vec4]) -> SortedSvd {
        let n = rows.len().max(4);
        let mut m = DMatrix::<f64>::zeros(n, 4);
        for (i, r) in rows.iter().enumerate() {
            for j in 0..4 {
                m[(i, j)] = r[j];
            }
        }
        let svd = m.svd(false, true);
        let vt = svd.v_t.expect("requested right singular vectors");
        let mut idx: Vec<usize> = (0..4).collect();
        idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let mut values = [0.0; 4];
        let mut vectors = [Vec4::zeros(); 4];
        for (k, &i) in idx.iter().enumerate() {
            values[k] = svd.singular_values[i];
            vectors[k] = Vec4::new(vt[(i, 0)], vt[(i, 1)], vt[(i, 2)], vt[(i, 3)]);
        }
        SortedSvd { values, vectors }
    }
}

/// Rows `J v / |v|` whose kernel is the eta-orthogonal complement of `vs`.
pub(crate) fn eta_rows(vs: &[Vec4]) -> Vec<Vec4> {
    vs.iter()
        .map(|v| {
            let r = Vec4::new(v.x, v.y, v.z, -v.w);
            r / r.norm()
        })
        .collect()
}

/// Basis of the eta-orthogonal complement of the span of `vs`, taking
/// singular values below `tol` as zero.
pub fn null_space(vs: &[Vec4], tol: f64) -> Vec<Vec4> {
    let svd = SortedSvd::of_rows(&eta_rows(vs));
    (0..4)
        .filter(|&k| svd.values[k] <= tol)
        .map(|k| svd.vectors[k])
        .collect()
}

/// Sphere point represented by a nonzero light-like vector.
pub fn sphere_point_of_light(l: &Vec4) -> Vec3 {
    let s = Vec3::new(l.x, l.y, l.z);
    let q = s / l.w;
    q / q.norm()
}

/// Light-like directions in the plane spanned by `a` and `b`, returned as
/// sphere points. `None` when the plane has no real light-like direction.
pub fn light_points(a: &Vec4, b: &Vec4, tol: f64) -> Option<[Vec3; 2]> {
    let g11 = eta(a, a);
    let g12 = eta(a, b);
    let g22 = eta(b, b);
    let disc = g12 * g12 - g11 * g22;
    let scale = g11.abs().max(g22.abs()).max(g12.abs()).max(f64::MIN_POSITIVE);
    if disc <= tol * scale * scale {
        return None;
    }
    // Roots of g11 s^2 + 2 g12 s t + g22 t^2 = 0 in the cancellation-free form.
    let q = -(g12 + g12.signum() * disc.sqrt());
    let dirs = [(q, g11), (g22, q)];
    let mut out = [Vec3::zeros(); 2];
    for (k, (s, t)) in dirs.iter().enumerate() {
        let l = a * *s + b * *t;
        if l.w.abs() < 1e-300 {
            return None;
        }
        out[k] = sphere_point_of_light(&l);
    }
    Some(out)
}
