use super::{chordal_area, dot4, sub4, SphericalTriMesh};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Triangles with smaller chordal area have unreliable cotangents.
pub const DEGENERATE_AREA: f64 = 1e-14;

/// Cotangent stiffness and lumped mass discretising `−Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacePair {
    pub stiffness: CsrMatrix,
    /// Diagonal of the lumped mass matrix (vertex area weights).
    pub mass: Vec<f64>,
}

impl LaplacePair {
    pub fn new(stiffness: CsrMatrix, mass: Vec<f64>) -> Result<Self> {
        if stiffness.dim() != mass.len() {
            return Err(Error::Precondition(format!(
                "stiffness is {0}×{0} but mass has {1} entries",
                stiffness.dim(),
                mass.len()
            )));
        }
        if let Some(i) = mass.iter().position(|m| !(*m > 0.0)) {
            return Err(Error::Precondition(format!("mass entry {i} is not positive")));
        }
        Ok(Self { stiffness, mass })
    }

    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Multiplies the stiffness by `ls` and the mass by `ms`.
    pub fn scaled(&self, ls: f64, ms: f64) -> Self {
        Self {
            stiffness: self.stiffness.scaled(ls),
            mass: self.mass.iter().map(|m| m * ms).collect(),
        }
    }

    /// Largest `|Σⱼ Lᵢⱼ|`, which vanishes for an exact discretisation.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.stiffness.row(i).map(|(_, v)| v).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}

/// Assembles the cotangent Laplacian on the chordal triangles.
pub fn assemble_laplacian(mesh: &SphericalTriMesh) -> Result<LaplacePair> {
    let v = mesh.vertices();
    let n = v.len();
    let mut triplets = Vec::with_capacity(12 * mesh.triangle_count());
    let mut mass = vec![0.0; n];
    for (ti, t) in mesh.triangles().iter().enumerate() {
        let area = chordal_area(&v[t[0]], &v[t[1]], &v[t[2]]);
        if !(area >= DEGENERATE_AREA) {
            return Err(Error::DegenerateTriangle { index: ti, area });
        }
        for k in 0..3 {
            let (c, a, b) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
            let cot = dot4(&sub4(&v[a], &v[c]), &sub4(&v[b], &v[c])) / (2.0 * area);
            let w = 0.5 * cot;
            triplets.push((a, b, -w));
            triplets.push((b, a, -w));
            triplets.push((a, a, w));
            triplets.push((b, b, w));
            mass[c] += area / 3.0;
        }
    }
    LaplacePair::new(CsrMatrix::from_triplets(n, triplets), mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{gen_clifford_torus, gen_geodesic_sphere};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn constants_in_kernel_and_mass_is_area() {
        for m in [gen_clifford_torus(16, 24).unwrap(), gen_geodesic_sphere(FRAC_PI_2, 3).unwrap()] {
            let pair = assemble_laplacian(&m).unwrap();
            assert!(pair.max_row_sum() <= 1e-10 * pair.stiffness.max_abs());
            assert!(pair.stiffness.is_symmetric(0.0));
            assert!((pair.total_mass() - m.area()).abs() < 1e-12 * m.area());
        }
    }

    #[test]
    fn degenerate_triangle_is_named() {
        let h = 1e-8;
        let v = vec![
            [1.0, 0.0, 0.0, 0.0],
            [(1.0f64 - h * h).sqrt(), h, 0.0, 0.0],
            [(1.0f64 - h * h).sqrt(), 0.0, h, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let t = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
        let m = SphericalTriMesh::new(v, t).unwrap();
        assert!(matches!(assemble_laplacian(&m), Err(Error::DegenerateTriangle { index: 0, .. })));
    }
}
