//! S3OFF: a plain-text mesh format for surfaces in S³.
//!
//! ```text
//! S3OFF
//! V F
//! x0 x1 x2 x3        (V lines, unit norm)
//! 3 i j k            (F lines, zero-based)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{norm4, SphericalTriMesh, Vec4, UNIT_TOL};
use crate::error::{Error, Result};

pub const MAGIC: &str = "S3OFF";

pub fn to_s3off(mesh: &SphericalTriMesh) -> String {
    let mut out = String::with_capacity(80 * mesh.vertex_count() + 20 * mesh.triangle_count());
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "{} {}", mesh.vertex_count(), mesh.triangle_count()).unwrap();
    for v in mesh.vertices() {
        writeln!(out, "{:.16e} {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2], v[3]).unwrap();
    }
    for t in mesh.triangles() {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    out
}

pub fn parse_s3off(text: &str) -> Result<SphericalTriMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line: usize, message: String| Error::Parse { line, message };

    let (line, magic) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    if magic != MAGIC {
        return Err(err(line, format!("expected {MAGIC:?}, found {magic:?}")));
    }
    let (line, header) = lines.next().ok_or_else(|| err(line + 1, "missing counts".into()))?;
    let counts: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(line, format!("bad counts: {e}")))?;
    let [nv, nf] = counts[..] else {
        return Err(err(line, "expected two counts \"V F\"".into()));
    };

    let mut vertices: Vec<Vec4> = Vec::with_capacity(nv);
    let mut last = line;
    for _ in 0..nv {
        let (line, text) = lines
            .next()
            .ok_or_else(|| err(last + 1, format!("expected {nv} vertices, found {}", vertices.len())))?;
        last = line;
        let xs: Vec<f64> = text
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(line, format!("bad coordinate: {e}")))?;
        let [a, b, c, d] = xs[..] else {
            return Err(err(line, format!("expected 4 coordinates, found {}", xs.len())));
        };
        let v = [a, b, c, d];
        let n = norm4(&v);
        if !((n - 1.0).abs() <= UNIT_TOL) {
            return Err(err(line, format!("vertex norm {n} is not 1 within {UNIT_TOL:e}")));
        }
        vertices.push(v);
    }

    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, text) = lines
            .next()
            .ok_or_else(|| err(last + 1, format!("expected {nf} faces, found {}", triangles.len())))?;
        last = line;
        let ids: Vec<usize> = text
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(line, format!("bad face index: {e}")))?;
        let [3, i, j, k] = ids[..] else {
            return Err(err(line, "faces must be triangles written \"3 i j k\"".into()));
        };
        if i.max(j).max(k) >= nv {
            return Err(err(line, format!("face index out of range for {nv} vertices")));
        }
        triangles.push([i, j, k]);
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, "trailing content after the last face".into()));
    }
    SphericalTriMesh::new(vertices, triangles)
}

pub fn read_s3off(path: &Path) -> Result<SphericalTriMesh> {
    parse_s3off(&std::fs::read_to_string(path)?)
}

pub fn write_s3off(path: &Path, mesh: &SphericalTriMesh) -> Result<()> {
    std::fs::write(path, to_s3off(mesh))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::gen_flat_torus;

    #[test]
    fn round_trip_is_lossless() {
        let m = gen_flat_torus(0.6, 9, 11).unwrap();
        let back = parse_s3off(&to_s3off(&m)).unwrap();
        assert_eq!(back.vertices(), m.vertices());
        assert_eq!(back.triangles(), m.triangles());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_norm = "S3OFF\n1 0\n1 1 0 0\n";
        assert!(matches!(parse_s3off(bad_norm), Err(Error::Parse { line: 3, .. })));
        let bad_face = "S3OFF\n3 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n4 0 1 2\n";
        assert!(matches!(parse_s3off(bad_face), Err(Error::Parse { line: 6, .. })));
        assert!(matches!(parse_s3off("OFF\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_s3off("S3OFF\n2 1\n1 0 0 0\n"), Err(Error::Parse { .. })));
        // Parses, but an open triangle is not a closed surface.
        let open = "S3OFF\n3 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n3 0 1 2\n";
        assert!(matches!(parse_s3off(open), Err(Error::InvalidMesh(_))));
    }
}
