//! Fixtures shared by the kernel benchmarks.

use sphere_spectra_core::{assemble_laplacian, gen_clifford_torus, LaplacePair, SphericalTriMesh};

/// Clifford torus on a square `res × res` grid.
pub fn clifford(res: usize) -> SphericalTriMesh {
    gen_clifford_torus(res, res).expect("grid resolution is at least 8")
}

/// Clifford torus and its cotangent stiffness/mass pair.
pub fn clifford_pair(res: usize) -> (SphericalTriMesh, LaplacePair) {
    let mesh = clifford(res);
    let pair = assemble_laplacian(&mesh).expect("generated meshes are non-degenerate");
    (mesh, pair)
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_build() {
        let (mesh, pair) = super::clifford_pair(16);
        assert_eq!(pair.dim(), mesh.vertex_count());
    }
}
