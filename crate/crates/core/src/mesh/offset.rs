use super::{axpy4, discrete_shape_operator, scale4, SphericalTriMesh, Vec4};
use crate::error::{Error, Result};
use crate::sphere::{embeddedness_horizon, OffsetDistance, PrincipalCurvatureSet};

/// Moves every vertex to `cos t · p + sin t · ν` and transports the normal
/// to `−sin t · p + cos t · ν`.
///
/// Attached normals are used when present; otherwise they are estimated. The
/// horizon comes from the analytic curvatures when the mesh carries them and
/// from the discrete ones otherwise.
pub fn offset_mesh(mesh: &SphericalTriMesh, t: OffsetDistance) -> Result<SphericalTriMesh> {
    let t = t.value();
    if !t.is_finite() {
        return Err(Error::Precondition(format!("offset distance {t} is not finite")));
    }
    let estimated;
    let (normals, kappa_sets): (&[Vec4], Vec<PrincipalCurvatureSet>) = match (mesh.normals(), mesh.analytic()) {
        (Some(ns), Some(a)) => (ns, vec![a.kappas()]),
        _ => {
            estimated = discrete_shape_operator(mesh)?;
            let kappas = (0..estimated.vertex_count())
                .map(|i| estimated.principal_curvatures(i))
                .collect();
            (mesh.normals().unwrap_or(&estimated.normals), kappas)
        }
    };
    let horizon = kappa_sets
        .iter()
        .map(embeddedness_horizon)
        .fold(f64::INFINITY, f64::min);
    if !(t.abs() < horizon) {
        return Err(Error::BeyondHorizon { t, horizon });
    }

    let (s, c) = t.sin_cos();
    let mut vertices = Vec::with_capacity(mesh.vertex_count());
    let mut moved_normals = Vec::with_capacity(mesh.vertex_count());
    for (p, nu) in mesh.vertices().iter().zip(normals) {
        vertices.push(axpy4(s, nu, &scale4(c, p)));
        moved_normals.push(axpy4(-s, p, &scale4(c, nu)));
    }
    Ok(SphericalTriMesh::from_parts(
        vertices,
        mesh.triangles().to_vec(),
        Some(moved_normals),
        mesh.analytic().and_then(|a| a.offset(t)),
        mesh.topology(),
    ))
}
