use serde::{Deserialize, Serialize};

use super::{chordal_area, cross4, dot4, norm4, normalize4, scale4, sub4, axpy4, SphericalTriMesh, Vec4};
use crate::error::{Error, Result};
use crate::sphere::PrincipalCurvatureSet;

/// Per-vertex curvature estimates and their global summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteGeometry {
    /// Lumped (barycentric) area per vertex.
    pub area_weights: Vec<f64>,
    pub normals: Vec<Vec4>,
    /// Orthonormal tangent frame `(t₁, t₂)` the shape operators are written in.
    pub frames: Vec<[Vec4; 2]>,
    /// Symmetric `S = −dν` in the tangent frame.
    pub shape_operators: Vec<[[f64; 2]; 2]>,
    pub norm_a: Vec<f64>,
    pub mean_curvature: Vec<f64>,
    pub total_area: f64,
    /// `max ‖A‖` over the vertices.
    pub lambda: f64,
    pub genus: i64,
    /// Vertices whose one-ring fit was rank-deficient and took analytic values.
    pub fallback_vertices: Vec<usize>,
}

impl DiscreteGeometry {
    pub fn vertex_count(&self) -> usize {
        self.area_weights.len()
    }

    pub fn principal_curvatures(&self, i: usize) -> PrincipalCurvatureSet {
        let [[a, b], [_, d]] = self.shape_operators[i];
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        PrincipalCurvatureSet::new(vec![mid + rad, mid - rad])
    }

    pub fn min_mean_curvature(&self) -> f64 {
        self.mean_curvature.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_mean_curvature(&self) -> f64 {
        self.mean_curvature.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_mean_curvature(&self) -> f64 {
        self.mean_curvature.iter().fold(0.0, |m, h| m.max(h.abs()))
    }

    /// Area-weighted `∫ ‖A‖²(‖A‖² − n)` for surfaces (`n = 2`).
    pub fn simons_integral(&self) -> f64 {
        self.norm_a
            .iter()
            .zip(&self.area_weights)
            .map(|(a, w)| {
                let a2 = a * a;
                w * a2 * (a2 - 2.0)
            })
            .sum()
    }

    /// `∫ ‖A‖²` with the lumped weights.
    pub fn total_curvature(&self) -> f64 {
        self.norm_a.iter().zip(&self.area_weights).map(|(a, w)| w * a * a).sum()
    }
}

/// Estimates normals and shape operators from the mesh alone.
///
/// Vertex normals sum face normals with Max's weights `1/(|e₁|²|e₂|²)`,
/// which recover the exact normal when the one-ring lies on a round sphere; `dν` is then fit by least squares over each one-ring.
pub fn discrete_shape_operator(mesh: &SphericalTriMesh) -> Result<DiscreteGeometry> {
    let v = mesh.vertices();
    let nv = v.len();
    let mut area_weights = vec![0.0; nv];
    let mut acc = vec![[0.0; 4]; nv];
    for t in mesh.triangles() {
        let (a, b, c) = (&v[t[0]], &v[t[1]], &v[t[2]]);
        let area = chordal_area(a, b, c);
        let (e1, e2) = (sub4(b, a), sub4(c, a));
        let n = [cross4(a, &e1, &e2), cross4(b, &e1, &e2), cross4(c, &e1, &e2)];
        for k in 0..3 {
            let i = t[k];
            area_weights[i] += area / 3.0;
            let l1 = sub4(&v[t[(k + 1) % 3]], &v[i]);
            let l2 = sub4(&v[t[(k + 2) % 3]], &v[i]);
            let w = 1.0 / (dot4(&l1, &l1) * dot4(&l2, &l2));
            acc[i] = axpy4(w, &n[k], &acc[i]);
        }
    }
    let mut normals = Vec::with_capacity(nv);
    for (i, n) in acc.iter().enumerate() {
        let n = axpy4(-dot4(n, &v[i]), &v[i], n);
        let len = norm4(&n);
        if !(len > 0.0) {
            return Err(Error::InvalidMesh(format!("vertex {i} has no well-defined normal")));
        }
        normals.push(scale4(1.0 / len, &n));
    }
    fit_shape_operators(mesh, area_weights, normals)
}

fn fit_shape_operators(
    mesh: &SphericalTriMesh,
    area_weights: Vec<f64>,
    normals: Vec<Vec4>,
) -> Result<DiscreteGeometry> {
    let v = mesh.vertices();
    let nbrs = mesh.vertex_neighbors();
    let nv = v.len();
    let mut frames = Vec::with_capacity(nv);
    let mut shape_operators = Vec::with_capacity(nv);
    let mut fallback_vertices = Vec::new();

    for i in 0..nv {
        let (p, nu) = (&v[i], &normals[i]);
        let project = |x: &Vec4| {
            let x = axpy4(-dot4(x, p), p, x);
            axpy4(-dot4(&x, nu), nu, &x)
        };
        let first = sub4(&v[nbrs[i][0]], p);
        let t1 = normalize4(&project(&first));
        let t2 = normalize4(&cross4(p, nu, &t1));
        // Normal equations of min Σ w |B x − y|² with x = dp, y = dν in the frame.
        let (mut xx, mut yx) = ([[0.0; 2]; 2], [[0.0; 2]; 2]);
        for &j in &nbrs[i] {
            let dp = sub4(&v[j], p);
            let dn = sub4(&normals[j], nu);
            let w = 1.0 / dot4(&dp, &dp);
            let x = [dot4(&dp, &t1), dot4(&dp, &t2)];
            let y = [dot4(&dn, &t1), dot4(&dn, &t2)];
            for r in 0..2 {
                for c in 0..2 {
                    xx[r][c] += w * x[r] * x[c];
                    yx[r][c] += w * y[r] * x[c];
                }
            }
        }
        let det = xx[0][0] * xx[1][1] - xx[0][1] * xx[1][0];
        let scale = xx[0][0] + xx[1][1];
        let s = if det > 1e-10 * scale * scale {
            let inv = [[xx[1][1] / det, -xx[0][1] / det], [-xx[1][0] / det, xx[0][0] / det]];
            let mut b = [[0.0; 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    b[r][c] = yx[r][0] * inv[0][c] + yx[r][1] * inv[1][c];
                }
            }
            let off = -0.5 * (b[0][1] + b[1][0]);
            [[-b[0][0], off], [off, -b[1][1]]]
        } else if let Some(analytic) = mesh.analytic() {
            // Homogeneous families: the analytic operator in its own principal
            // frame is diagonal, so only the curvature values matter here.
            fallback_vertices.push(i);
            let k = analytic.kappas();
            [[k.kappas()[0], 0.0], [0.0, k.kappas()[1]]]
        } else {
            return Err(Error::InvalidMesh(format!(
                "one-ring of vertex {i} is rank-deficient for the shape-operator fit"
            )));
        };
        frames.push([t1, t2]);
        shape_operators.push(s);
    }

    let norm_a: Vec<f64> = shape_operators
        .iter()
        .map(|s| (s[0][0] * s[0][0] + 2.0 * s[0][1] * s[0][1] + s[1][1] * s[1][1]).sqrt())
        .collect();
    let mean_curvature: Vec<f64> = shape_operators.iter().map(|s| s[0][0] + s[1][1]).collect();
    let lambda = norm_a.iter().copied().fold(0.0, f64::max);
    Ok(DiscreteGeometry {
        total_area: area_weights.iter().sum(),
        area_weights,
        normals,
        frames,
        shape_operators,
        norm_a,
        mean_curvature,
        lambda,
        genus: mesh.genus(),
        fallback_vertices,
    })
}
