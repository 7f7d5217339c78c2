//! Closed triangulated surfaces in S³ ⊂ R⁴.

mod generators;
mod intersect;
pub mod io;
mod laplacian;
mod offset;
mod shape;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::PrincipalCurvatureSet;

pub use generators::{gen_clifford_torus, gen_flat_torus, gen_geodesic_sphere};
pub use intersect::{
    self_intersection_test, stereographic_projection, triangles_intersect, IntersectionReport,
    Point3,
};
pub use laplacian::{assemble_laplacian, LaplacePair, DEGENERATE_AREA};
pub use offset::offset_mesh;
pub use shape::{discrete_shape_operator, DiscreteGeometry};

pub type Vec4 = [f64; 4];

/// Vertices must lie on the unit sphere to this tolerance.
pub const UNIT_TOL: f64 = 1e-9;

pub(crate) fn dot4(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub(crate) fn sub4(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub(crate) fn axpy4(a: f64, x: &Vec4, y: &Vec4) -> Vec4 {
    [a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2], a * x[3] + y[3]]
}

pub(crate) fn scale4(a: f64, x: &Vec4) -> Vec4 {
    [a * x[0], a * x[1], a * x[2], a * x[3]]
}

pub(crate) fn norm4(a: &Vec4) -> f64 {
    dot4(a, a).sqrt()
}

pub(crate) fn normalize4(a: &Vec4) -> Vec4 {
    scale4(1.0 / norm4(a), a)
}

/// The vector `n` with `n · x = det[u; v; w; x]`, orthogonal to `u, v, w`.
pub(crate) fn cross4(u: &Vec4, v: &Vec4, w: &Vec4) -> Vec4 {
    let minor = |c: [usize; 3]| {
        u[c[0]] * (v[c[1]] * w[c[2]] - v[c[2]] * w[c[1]])
            - u[c[1]] * (v[c[0]] * w[c[2]] - v[c[2]] * w[c[0]])
            + u[c[2]] * (v[c[0]] * w[c[1]] - v[c[1]] * w[c[0]])
    };
    [
        -minor([1, 2, 3]),
        minor([0, 2, 3]),
        -minor([0, 1, 3]),
        minor([0, 1, 2]),
    ]
}

/// Homogeneous analytic families with known geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum AnalyticSurface {
    /// `S¹(r) × S¹(√(1−r²))`; the normal points at the circle in the
    /// `(x₃, x₄)` plane, a distance `arcsin r` away.
    FlatTorus { r: f64 },
    /// Geodesic sphere of radius `r` about `e₁`, normal pointing at `e₁`.
    GeodesicSphere { r: f64 },
}

impl AnalyticSurface {
    pub fn kappas(&self) -> PrincipalCurvatureSet {
        match *self {
            AnalyticSurface::FlatTorus { r } => {
                let s = (1.0 - r * r).sqrt();
                PrincipalCurvatureSet::new(vec![s / r, -r / s])
            }
            AnalyticSurface::GeodesicSphere { r } => {
                // cos(π/2) rounds to 6e-17; the equator is exactly geodesic.
                let k = if r == std::f64::consts::FRAC_PI_2 { 0.0 } else { r.cos() / r.sin() };
                PrincipalCurvatureSet::new(vec![k, k])
            }
        }
    }

    pub fn area(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            AnalyticSurface::FlatTorus { r } => 4.0 * PI * PI * r * (1.0 - r * r).sqrt(),
            AnalyticSurface::GeodesicSphere { r } => 4.0 * PI * r.sin().powi(2),
        }
    }

    pub fn genus(&self) -> i64 {
        match self {
            AnalyticSurface::FlatTorus { .. } => 1,
            AnalyticSurface::GeodesicSphere { .. } => 0,
        }
    }

    /// First non-zero eigenvalue of the induced Laplacian.
    pub fn lambda1(&self) -> f64 {
        match *self {
            // Flat metric: k²/r² + l²/(1−r²).
            AnalyticSurface::FlatTorus { r } => (1.0 / (r * r)).min(1.0 / (1.0 - r * r)),
            // Round sphere of radius sin r: ℓ(ℓ+1)/sin²r.
            AnalyticSurface::GeodesicSphere { r } => 2.0 / r.sin().powi(2),
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.kappas().is_minimal(1e-12)
    }

    pub fn label(&self) -> String {
        match *self {
            AnalyticSurface::FlatTorus { r } if (r - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15 => {
                "clifford".to_string()
            }
            AnalyticSurface::FlatTorus { r } => format!("flat-torus(r={r})"),
            AnalyticSurface::GeodesicSphere { r } if r == std::f64::consts::FRAC_PI_2 => {
                "equator".to_string()
            }
            AnalyticSurface::GeodesicSphere { r } => format!("geodesic-sphere(r={r})"),
        }
    }

    /// The family member at signed distance `t` along the normal.
    pub fn offset(&self, t: f64) -> Option<AnalyticSurface> {
        match *self {
            AnalyticSurface::FlatTorus { r } => {
                let rho = r.asin() - t;
                (rho > 0.0 && rho < std::f64::consts::FRAC_PI_2)
                    .then(|| AnalyticSurface::FlatTorus { r: rho.sin() })
            }
            AnalyticSurface::GeodesicSphere { r } => {
                let r = r - t;
                (r > 0.0 && r < std::f64::consts::PI).then_some(AnalyticSurface::GeodesicSphere { r })
            }
        }
    }
}

/// Combinatorial summary of a closed triangle mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
    pub euler_characteristic: i64,
    /// Total genus `(2c − χ)/2` over the `c` components.
    pub genus: i64,
}

/// A closed oriented triangulated surface with vertices on the unit S³.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalTriMesh {
    vertices: Vec<Vec4>,
    triangles: Vec<[usize; 3]>,
    normals: Option<Vec<Vec4>>,
    analytic: Option<AnalyticSurface>,
    topology: Topology,
}

impl SphericalTriMesh {
    /// Validates unit norms and that the triangles form a closed, consistently
    /// oriented 2-manifold.
    pub fn new(vertices: Vec<Vec4>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            let n = norm4(v);
            if !((n - 1.0).abs() <= UNIT_TOL) {
                return Err(Error::InvalidMesh(format!("vertex {i} has norm {n}")));
            }
        }
        let topology = validate_topology(vertices.len(), &triangles)?;
        Ok(Self {
            vertices,
            triangles,
            normals: None,
            analytic: None,
            topology,
        })
    }

    /// Attaches per-vertex unit normals (tangent to S³).
    pub fn with_normals(mut self, normals: Vec<Vec4>) -> Result<Self> {
        if normals.len() != self.vertices.len() {
            return Err(Error::InvalidMesh("normal count differs from vertex count".into()));
        }
        for (i, (nu, p)) in normals.iter().zip(&self.vertices).enumerate() {
            if (norm4(nu) - 1.0).abs() > UNIT_TOL || dot4(nu, p).abs() > UNIT_TOL {
                return Err(Error::InvalidMesh(format!("normal {i} is not a unit tangent vector")));
            }
        }
        self.normals = Some(normals);
        Ok(self)
    }

    pub fn with_analytic(mut self, analytic: AnalyticSurface) -> Self {
        self.analytic = Some(analytic);
        self
    }

    pub fn vertices(&self) -> &[Vec4] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn normals(&self) -> Option<&[Vec4]> {
        self.normals.as_deref()
    }

    pub fn analytic(&self) -> Option<&AnalyticSurface> {
        self.analytic.as_ref()
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn genus(&self) -> i64 {
        self.topology.genus
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Sum of chordal triangle areas.
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| chordal_area(&self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]]))
            .sum()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| {
                [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                    .map(|(a, b)| norm4(&sub4(&self.vertices[a], &self.vertices[b])))
            })
            .fold(0.0, f64::max)
    }

    /// Disjoint union; analytic data is dropped.
    pub fn union(&self, other: &SphericalTriMesh) -> Result<SphericalTriMesh> {
        let offset = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut triangles = self.triangles.clone();
        triangles.extend(other.triangles.iter().map(|t| t.map(|i| i + offset)));
        let mesh = SphericalTriMesh::new(vertices, triangles)?;
        match (&self.normals, &other.normals) {
            (Some(a), Some(b)) => {
                let mut normals = a.clone();
                normals.extend_from_slice(b);
                mesh.with_normals(normals)
            }
            _ => Ok(mesh),
        }
    }

    /// Applies the rotation by `angle` in the `(i, j)` coordinate plane.
    pub fn rotated(&self, i: usize, j: usize, angle: f64) -> SphericalTriMesh {
        let (s, c) = angle.sin_cos();
        let rot = |v: &Vec4| {
            let mut w = *v;
            w[i] = c * v[i] - s * v[j];
            w[j] = s * v[i] + c * v[j];
            w
        };
        SphericalTriMesh {
            vertices: self.vertices.iter().map(rot).collect(),
            triangles: self.triangles.clone(),
            normals: self.normals.as_ref().map(|ns| ns.iter().map(rot).collect()),
            analytic: self.analytic,
            topology: self.topology,
        }
    }

    /// Vertex adjacency lists, sorted.
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.vertices.len()];
        for t in &self.triangles {
            for k in 0..3 {
                let a = t[k];
                let b = t[(k + 1) % 3];
                nbrs[a].push(b);
                nbrs[b].push(a);
            }
        }
        for list in &mut nbrs {
            list.sort_unstable();
            list.dedup();
        }
        nbrs
    }

    pub(crate) fn from_parts(
        vertices: Vec<Vec4>,
        triangles: Vec<[usize; 3]>,
        normals: Option<Vec<Vec4>>,
        analytic: Option<AnalyticSurface>,
        topology: Topology,
    ) -> Self {
        Self {
            vertices,
            triangles,
            normals,
            analytic,
            topology,
        }
    }
}

pub(crate) fn chordal_area(a: &Vec4, b: &Vec4, c: &Vec4) -> f64 {
    let u = sub4(b, a);
    let v = sub4(c, a);
    let uu = dot4(&u, &u);
    let vv = dot4(&v, &v);
    let uv = dot4(&u, &v);
    0.5 * (uu * vv - uv * uv).max(0.0).sqrt()
}

fn validate_topology(nv: usize, triangles: &[[usize; 3]]) -> Result<Topology> {
    if triangles.is_empty() {
        return Err(Error::InvalidMesh("mesh has no triangles".into()));
    }
    // Directed edge -> owning triangle.
    let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * triangles.len());
    let mut used = vec![false; nv];
    for (ti, t) in triangles.iter().enumerate() {
        if t.iter().any(|&i| i >= nv) {
            return Err(Error::InvalidMesh(format!("triangle {ti} references a missing vertex")));
        }
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(Error::InvalidMesh(format!("triangle {ti} repeats a vertex")));
        }
        for k in 0..3 {
            used[t[k]] = true;
            let e = (t[k], t[(k + 1) % 3]);
            if let Some(other) = directed.insert(e, ti) {
                return Err(Error::InvalidMesh(format!(
                    "edge {e:?} is used with the same orientation by triangles {other} and {ti}"
                )));
            }
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::InvalidMesh(format!("vertex {i} belongs to no triangle")));
    }
    for &(a, b) in directed.keys() {
        if !directed.contains_key(&(b, a)) {
            return Err(Error::InvalidMesh(format!(
                "edge ({a}, {b}) is a boundary edge or inconsistently oriented"
            )));
        }
    }
    let edges = directed.len() / 2;

    // Connected components by union-find over triangle edges.
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in triangles {
        for k in 0..3 {
            let a = find(&mut parent, t[k]);
            let b = find(&mut parent, t[(k + 1) % 3]);
            if a != b {
                parent[a] = b;
            }
        }
    }
    let components = (0..nv).filter(|&i| find(&mut parent, i) == i).count();
    let chi = nv as i64 - edges as i64 + triangles.len() as i64;
    Ok(Topology {
        vertices: nv,
        edges,
        faces: triangles.len(),
        components,
        euler_characteristic: chi,
        genus: (2 * components as i64 - chi) / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> (Vec<Vec4>, Vec<[usize; 3]>) {
        let s = 1.0 / 3f64.sqrt();
        let v = vec![
            [s, s, s, 0.0],
            [s, -s, -s, 0.0],
            [-s, s, -s, 0.0],
            [-s, -s, s, 0.0],
        ];
        let t = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
        (v, t)
    }

    #[test]
    fn tetrahedron_is_a_sphere() {
        let (v, t) = tetra();
        let m = SphericalTriMesh::new(v, t).unwrap();
        let topo = m.topology();
        assert_eq!(topo.euler_characteristic, 2);
        assert_eq!(topo.genus, 0);
        assert_eq!(topo.components, 1);
    }

    #[test]
    fn open_or_misoriented_meshes_rejected() {
        let (v, mut t) = tetra();
        t.pop();
        assert!(matches!(SphericalTriMesh::new(v.clone(), t), Err(Error::InvalidMesh(_))));
        let (_, mut t) = tetra();
        t[3] = [1, 2, 3];
        assert!(SphericalTriMesh::new(v.clone(), t).is_err());
        let (mut v2, t) = tetra();
        v2[0][0] *= 1.01;
        assert!(SphericalTriMesh::new(v2, t).is_err());
    }

    #[test]
    fn cross4_is_orthogonal_and_oriented() {
        let e = |i: usize| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            v
        };
        let n = cross4(&e(0), &e(1), &e(2));
        assert_eq!(n, [0.0, 0.0, 0.0, 1.0]);
        let u = [0.3, -0.2, 0.9, 0.1];
        let v = [0.5, 0.4, -0.1, 0.7];
        let w = [-0.2, 0.8, 0.3, -0.5];
        let n = cross4(&u, &v, &w);
        for x in [u, v, w] {
            assert!(dot4(&n, &x).abs() < 1e-15);
        }
    }

    #[test]
    fn union_counts_components() {
        let (v, t) = tetra();
        let m = SphericalTriMesh::new(v, t).unwrap();
        let u = m.union(&m.rotated(0, 3, 0.5)).unwrap();
        assert_eq!(u.topology().components, 2);
        assert_eq!(u.topology().euler_characteristic, 4);
        assert_eq!(u.genus(), 0);
    }
}
