//! Embeddedness test: stereographic projection to R³ followed by exact
//! triangle–triangle intersection over a spatial hash.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust::{orient2d, orient3d, Coord, Coord3D};
use serde::{Deserialize, Serialize};

use super::{dot4, norm4, sub4, SphericalTriMesh, Vec4};
use crate::error::{Error, Result};

pub type Point3 = [f64; 3];

const POLE_SEED: u64 = 0x5eed_70be;
const RANDOM_POLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub embedded: bool,
    /// Pairs of triangle indices that intersect, sorted.
    pub witnesses: Vec<(usize, usize)>,
    pub pole: Vec4,
    /// Chordal distance from the pole to the nearest vertex.
    pub pole_clearance: f64,
    /// Candidate pairs that reached the exact test.
    pub pairs_tested: usize,
}

/// Projects `x ∈ S³ ∖ {pole}` to R³ in the orthonormal basis `frame` of `pole⊥`.
pub fn stereographic_projection(x: &Vec4, pole: &Vec4, frame: &[Vec4; 3]) -> Point3 {
    let denom = 1.0 - dot4(x, pole);
    frame.map(|e| dot4(x, &e) / denom)
}

/// Orthonormal basis of the orthogonal complement of a unit vector.
fn complement_frame(pole: &Vec4) -> [Vec4; 3] {
    let mut basis: Vec<Vec4> = vec![*pole];
    for i in 0..4 {
        if basis.len() == 4 {
            break;
        }
        let mut e = [0.0; 4];
        e[i] = 1.0;
        for b in &basis {
            let c = dot4(&e, b);
            for k in 0..4 {
                e[k] -= c * b[k];
            }
        }
        let n = norm4(&e);
        if n > 0.5 {
            basis.push(e.map(|x| x / n));
        }
    }
    [basis[1], basis[2], basis[3]]
}

fn min_vertex_distance(pole: &Vec4, vertices: &[Vec4]) -> f64 {
    vertices
        .iter()
        .map(|v| norm4(&sub4(v, pole)))
        .fold(f64::INFINITY, f64::min)
}

/// Picks the candidate pole farthest from every vertex: the eight `±eᵢ` and
/// a fixed set of pseudo-random directions.
fn choose_pole(vertices: &[Vec4]) -> (Vec4, f64) {
    let mut candidates = Vec::with_capacity(8 + RANDOM_POLES);
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut e = [0.0; 4];
            e[i] = s;
            candidates.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POLE_SEED);
    while candidates.len() < 8 + RANDOM_POLES {
        let v: Vec4 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = norm4(&v);
        if n > 0.1 && n <= 1.0 {
            candidates.push(v.map(|x| x / n));
        }
    }
    candidates
        .into_iter()
        .map(|c| (c, min_vertex_distance(&c, vertices)))
        .fold(([0.0; 4], f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Tests a closed mesh in S³ for self-intersections between triangles that
/// share no vertex.
pub fn self_intersection_test(mesh: &SphericalTriMesh) -> Result<IntersectionReport> {
    let (pole, clearance) = choose_pole(mesh.vertices());
    let needed = 2.0 * mesh.max_edge_length();
    if !(clearance >= needed) {
        return Err(Error::Configuration(format!(
            "no admissible projection pole: best clearance {clearance:.3e} is below twice the longest edge ({needed:.3e})"
        )));
    }
    let frame = complement_frame(&pole);
    let points: Vec<Point3> = mesh
        .vertices()
        .iter()
        .map(|v| stereographic_projection(v, &pole, &frame))
        .collect();
    let tris = mesh.triangles();
    let (witnesses, pairs_tested) = intersecting_pairs(&points, tris);
    Ok(IntersectionReport {
        embedded: witnesses.is_empty(),
        witnesses,
        pole,
        pole_clearance: clearance,
        pairs_tested,
    })
}

type Aabb = (Point3, Point3);

fn aabb(points: &[Point3], t: &[usize; 3]) -> Aabb {
    let mut lo = points[t[0]];
    let mut hi = lo;
    for &i in &t[1..] {
        for k in 0..3 {
            lo[k] = lo[k].min(points[i][k]);
            hi[k] = hi[k].max(points[i][k]);
        }
    }
    (lo, hi)
}

fn overlap(a: &Aabb, b: &Aabb) -> Option<Point3> {
    let mut lo = [0.0; 3];
    for k in 0..3 {
        if a.1[k] < b.0[k] || b.1[k] < a.0[k] {
            return None;
        }
        lo[k] = a.0[k].max(b.0[k]);
    }
    Some(lo)
}

fn intersecting_pairs(points: &[Point3], tris: &[[usize; 3]]) -> (Vec<(usize, usize)>, usize) {
    let boxes: Vec<Aabb> = tris.iter().map(|t| aabb(points, t)).collect();
    let mean_extent = boxes
        .iter()
        .map(|(lo, hi)| (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max))
        .sum::<f64>()
        / boxes.len() as f64;
    let h = if mean_extent > 0.0 { mean_extent } else { 1.0 };
    let cell_of = |p: &Point3| p.map(|x| (x / h).floor() as i64);

    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (ti, b) in boxes.iter().enumerate() {
        let (lo, hi) = (cell_of(&b.0), cell_of(&b.1));
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    grid.entry([x, y, z]).or_default().push(ti);
                }
            }
        }
    }

    let mut witnesses = Vec::new();
    let mut tested = 0;
    for (cell, members) in &grid {
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                let (ta, tb) = (&tris[a], &tris[b]);
                if ta.iter().any(|i| tb.contains(i)) {
                    continue;
                }
                // Each overlapping pair is tested once, in the cell holding
                // the lower corner of the box intersection.
                match overlap(&boxes[a], &boxes[b]) {
                    Some(lo) if cell_of(&lo) == *cell => {}
                    _ => continue,
                }
                tested += 1;
                let pa = ta.map(|i| points[i]);
                let pb = tb.map(|i| points[i]);
                if triangles_intersect(&pa, &pb) {
                    witnesses.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    witnesses.sort_unstable();
    (witnesses, tested)
}

fn c3(p: &Point3) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn orient(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> i8 {
    sign(orient3d(c3(a), c3(b), c3(c), c3(d)))
}

/// Closed segment against closed triangle, for a segment not lying in the
/// triangle's plane.
fn segment_hits_triangle(p: &Point3, q: &Point3, t: &[Point3; 3]) -> bool {
    let op = orient(&t[0], &t[1], &t[2], p);
    let oq = orient(&t[0], &t[1], &t[2], q);
    if op == oq {
        // Same side, or both in the plane (handled by the other edges).
        return false;
    }
    let s = [
        orient(p, q, &t[0], &t[1]),
        orient(p, q, &t[1], &t[2]),
        orient(p, q, &t[2], &t[0]),
    ];
    !(s.contains(&1) && s.contains(&-1))
}

/// Exact test for two closed triangles in R³.
pub fn triangles_intersect(a: &[Point3; 3], b: &[Point3; 3]) -> bool {
    let sides: Vec<i8> = b.iter().map(|p| orient(&a[0], &a[1], &a[2], p)).collect();
    if sides.iter().all(|&s| s == 0) {
        return coplanar_intersect(a, b);
    }
    if sides.iter().all(|&s| s == 1) || sides.iter().all(|&s| s == -1) {
        return false;
    }
    let edges = |t: &[Point3; 3]| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])];
    edges(a).iter().any(|(p, q)| segment_hits_triangle(p, q, b))
        || edges(b).iter().any(|(p, q)| segment_hits_triangle(p, q, a))
}

fn coplanar_intersect(a: &[Point3; 3], b: &[Point3; 3]) -> bool {
    // Drop the coordinate along which the common plane has the largest
    // normal component; the projection is then injective on the plane.
    let u = [a[1][0] - a[0][0], a[1][1] - a[0][1], a[1][2] - a[0][2]];
    let v = [a[2][0] - a[0][0], a[2][1] - a[0][1], a[2][2] - a[0][2]];
    let n = [
        (u[1] * v[2] - u[2] * v[1]).abs(),
        (u[2] * v[0] - u[0] * v[2]).abs(),
        (u[0] * v[1] - u[1] * v[0]).abs(),
    ];
    let drop = if n[0] >= n[1] && n[0] >= n[2] {
        0
    } else if n[1] >= n[2] {
        1
    } else {
        2
    };
    let keep: Vec<usize> = (0..3).filter(|&k| k != drop).collect();
    let flat = |t: &[Point3; 3]| t.map(|p| Coord { x: p[keep[0]], y: p[keep[1]] });
    triangles_intersect_2d(&flat(a), &flat(b))
}

fn o2(a: Coord<f64>, b: Coord<f64>, c: Coord<f64>) -> i8 {
    sign(orient2d(a, b, c))
}

fn point_in_triangle_2d(p: Coord<f64>, t: &[Coord<f64>; 3]) -> bool {
    let s = [o2(t[0], t[1], p), o2(t[1], t[2], p), o2(t[2], t[0], p)];
    !(s.contains(&1) && s.contains(&-1))
}

fn segments_intersect_2d(p: Coord<f64>, q: Coord<f64>, r: Coord<f64>, s: Coord<f64>) -> bool {
    let (d1, d2) = (o2(p, q, r), o2(p, q, s));
    let (d3, d4) = (o2(r, s, p), o2(r, s, q));
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    let on = |a: Coord<f64>, b: Coord<f64>, c: Coord<f64>| {
        c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    };
    (d1 == 0 && on(p, q, r)) || (d2 == 0 && on(p, q, s)) || (d3 == 0 && on(r, s, p)) || (d4 == 0 && on(r, s, q))
}

fn triangles_intersect_2d(a: &[Coord<f64>; 3], b: &[Coord<f64>; 3]) -> bool {
    for i in 0..3 {
        for j in 0..3 {
            if segments_intersect_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3]) {
                return true;
            }
        }
    }
    point_in_triangle_2d(a[0], b) || point_in_triangle_2d(b[0], a)
}
