use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use super::{cross4, dot4, sub4, AnalyticSurface, SphericalTriMesh, Vec4};
use crate::error::{Error, Result};

const MIN_RES: usize = 8;
const MIN_SUBDIV: usize = 3;

/// The Clifford torus `S¹(1/√2) × S¹(1/√2)` on a `res_u × res_v` grid.
pub fn gen_clifford_torus(res_u: usize, res_v: usize) -> Result<SphericalTriMesh> {
    gen_flat_torus(FRAC_1_SQRT_2, res_u, res_v)
}

/// `S¹(r) × S¹(√(1−r²))`, parametrised by `(r cos θ, r sin θ, s cos φ, s sin φ)`
/// with quads split along one diagonal.
pub fn gen_flat_torus(r: f64, res_u: usize, res_v: usize) -> Result<SphericalTriMesh> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Precondition(format!("flat torus radius {r} must lie in (0, 1)")));
    }
    if res_u < MIN_RES || res_v < MIN_RES {
        return Err(Error::Precondition(format!(
            "torus resolution {res_u}×{res_v} is below {MIN_RES}×{MIN_RES}"
        )));
    }
    let s = (1.0 - r * r).sqrt();
    let mut vertices = Vec::with_capacity(res_u * res_v);
    let mut normals = Vec::with_capacity(res_u * res_v);
    for i in 0..res_u {
        let (st, ct) = (2.0 * PI * i as f64 / res_u as f64).sin_cos();
        for j in 0..res_v {
            let (sp, cp) = (2.0 * PI * j as f64 / res_v as f64).sin_cos();
            vertices.push([r * ct, r * st, s * cp, s * sp]);
            normals.push([-s * ct, -s * st, r * cp, r * sp]);
        }
    }
    let idx = |i: usize, j: usize| (i % res_u) * res_v + (j % res_v);
    let mut triangles = Vec::with_capacity(2 * res_u * res_v);
    for i in 0..res_u {
        for j in 0..res_v {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    orient_along(&vertices, &mut triangles, &normals);
    let analytic = AnalyticSurface::FlatTorus { r };
    Ok(SphericalTriMesh::new(vertices, triangles)?
        .with_normals(normals)?
        .with_analytic(analytic))
}

/// Geodesic sphere of radius `r` about `e₁`: an icosphere of directions `d`
/// in the tangent space at `e₁`, mapped by `cos r · e₁ + sin r · d`.
pub fn gen_geodesic_sphere(r: f64, subdiv: usize) -> Result<SphericalTriMesh> {
    if !(r > 0.0 && r <= FRAC_PI_2) {
        return Err(Error::Precondition(format!("geodesic radius {r} must lie in (0, π/2]")));
    }
    if subdiv < MIN_SUBDIV {
        return Err(Error::Precondition(format!(
            "icosphere subdivision {subdiv} is below {MIN_SUBDIV}"
        )));
    }
    let (dirs, faces) = icosphere(subdiv);
    let (sr, cr) = r.sin_cos();
    let vertices: Vec<Vec4> = dirs.iter().map(|d| [cr, sr * d[0], sr * d[1], sr * d[2]]).collect();
    let normals: Vec<Vec4> = dirs
        .iter()
        .map(|d| [sr, -cr * d[0], -cr * d[1], -cr * d[2]])
        .collect();
    let mut triangles = faces;
    orient_along(&vertices, &mut triangles, &normals);
    Ok(SphericalTriMesh::new(vertices, triangles)?
        .with_normals(normals)?
        .with_analytic(AnalyticSurface::GeodesicSphere { r }))
}

/// Flips every triangle when the first one disagrees with the normal field.
/// Generators produce consistently wound triangles, so one test suffices.
fn orient_along(vertices: &[Vec4], triangles: &mut [[usize; 3]], normals: &[Vec4]) {
    let t = triangles[0];
    let (a, b, c) = (&vertices[t[0]], &vertices[t[1]], &vertices[t[2]]);
    let face = cross4(a, &sub4(b, a), &sub4(c, a));
    if dot4(&face, &normals[t[0]]) < 0.0 {
        for t in triangles.iter_mut() {
            t.swap(1, 2);
        }
    }
}

/// Unit icosphere: 10·4ᵏ + 2 vertices.
fn icosphere(subdiv: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let normalize = |p: [f64; 3]| {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        [p[0] / n, p[1] / n, p[2] / n]
    };
    let mut verts: Vec<[f64; 3]> = raw.iter().map(|&p| normalize(p)).collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdiv {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (verts, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn clifford_64_counts_and_area() {
        let m = gen_clifford_torus(64, 64).unwrap();
        assert_eq!(m.vertex_count(), 4096);
        assert_eq!(m.topology().euler_characteristic, 0);
        assert_eq!(m.genus(), 1);
        let exact = 2.0 * PI * PI;
        assert!((m.area() - exact).abs() / exact < 5e-3, "area {}", m.area());
        assert!(m.analytic().unwrap().is_minimal());
    }

    #[test]
    fn flat_torus_half_radius() {
        let m = gen_flat_torus(0.5, 64, 64).unwrap();
        let a = m.analytic().unwrap();
        let h = a.kappas().mean_curvature();
        assert!((h - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((a.area() - PI * PI * 3f64.sqrt()).abs() < 1e-12);
        assert!((a.lambda1() - 4.0 / 3.0).abs() < 1e-14);
        assert!(gen_flat_torus(1.0, 16, 16).is_err());
        assert!(gen_flat_torus(0.5, 7, 16).is_err());
    }

    #[test]
    fn icosphere_sizes_and_area() {
        let m = gen_geodesic_sphere(FRAC_PI_2, 5).unwrap();
        assert_eq!(m.vertex_count(), 10242);
        assert_eq!(m.genus(), 0);
        assert!((m.area() - 4.0 * PI).abs() / (4.0 * PI) < 5e-3);
        assert!(m.analytic().unwrap().kappas().norm() < 1e-15);
        let s = AnalyticSurface::GeodesicSphere { r: FRAC_PI_4 };
        assert!((s.kappas().mean_curvature() - 2.0).abs() < 1e-15);
        assert!((s.kappas().norm() - 2f64.sqrt()).abs() < 1e-15);
        let s = AnalyticSurface::GeodesicSphere { r: PI / 6.0 };
        assert!((s.area() - PI).abs() < 1e-14);
        assert!(gen_geodesic_sphere(1.0, 2).is_err());
    }

    #[test]
    fn faces_agree_with_attached_normals() {
        for m in [gen_flat_torus(0.4, 16, 12).unwrap(), gen_geodesic_sphere(0.7, 3).unwrap()] {
            let ns = m.normals().unwrap();
            for t in m.triangles() {
                let v = m.vertices();
                let face = cross4(&v[t[0]], &sub4(&v[t[1]], &v[t[0]]), &sub4(&v[t[2]], &v[t[0]]));
                assert!(dot4(&face, &ns[t[0]]) > 0.0);
            }
        }
    }
}
