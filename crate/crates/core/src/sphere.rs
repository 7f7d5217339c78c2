//! Pointwise geometry of parallel hypersurfaces in the round sphere `Sⁿ⁺¹`.
//!
//! Curvatures are always taken with respect to the unit normal `X` along
//! which offsets are measured: a geodesic sphere of radius `r` has principal
//! curvatures `cot r` with respect to the normal pointing at its centre, and
//! moving a distance `t` along `X` sends `κ` to `tan(arctan κ + t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};

const UNIT_TOL: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A point of the unit sphere in `R^{n+2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint(Vec<f64>);

impl AmbientPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = dot(&coords, &coords).sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Precondition(format!("point has norm {norm}, expected 1")));
        }
        Ok(Self(coords))
    }

    /// Normalises `coords` onto the sphere.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let norm = dot(&coords, &coords).sqrt();
        if !(norm > 0.0) {
            return Err(Error::Domain("cannot normalise the zero vector".into()));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Great-circle distance.
    pub fn distance(&self, other: &AmbientPoint) -> f64 {
        dot(&self.0, &other.0).clamp(-1.0, 1.0).acos()
    }
}

/// A unit tangent vector of the sphere at `basepoint`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitNormal {
    vector: Vec<f64>,
    basepoint: AmbientPoint,
}

impl UnitNormal {
    pub fn new(vector: Vec<f64>, basepoint: AmbientPoint) -> Result<Self> {
        if vector.len() != basepoint.dim() {
            return Err(Error::Precondition("normal and basepoint differ in dimension".into()));
        }
        let norm = dot(&vector, &vector).sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Precondition(format!("normal has norm {norm}, expected 1")));
        }
        let c = dot(&vector, basepoint.coords());
        if c.abs() > UNIT_TOL {
            return Err(Error::Precondition(format!(
                "normal is not orthogonal to its basepoint (inner product {c:e})"
            )));
        }
        Ok(Self { vector, basepoint })
    }

    pub fn vector(&self) -> &[f64] {
        &self.vector
    }

    pub fn basepoint(&self) -> &AmbientPoint {
        &self.basepoint
    }
}

/// Principal curvatures `κ₁, …, κ_n` at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvatureSet(Vec<f64>);

impl PrincipalCurvatureSet {
    pub fn new(kappas: Vec<f64>) -> Self {
        Self(kappas)
    }

    pub fn kappas(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Mean curvature `Σ κᵢ`.
    pub fn mean_curvature(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `‖A‖ = (Σ κᵢ²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|k| k * k).sum::<f64>().sqrt()
    }

    /// `max |κᵢ|`.
    pub fn kappa_max(&self) -> f64 {
        self.0.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    pub fn is_minimal(&self, tol: f64) -> bool {
        self.mean_curvature().abs() <= tol
    }

    pub fn is_mean_convex(&self, tol: f64) -> bool {
        self.mean_curvature() >= -tol
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|k| k * factor).collect())
    }
}

/// Signed geodesic distance along the normal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct OffsetDistance(pub f64);

impl OffsetDistance {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which side of the surface a tube is swept on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Along the normal `X`.
    Plus,
    /// Against the normal.
    Minus,
}

/// `exp_p(tX) = cos t · p + sin t · X`.
pub fn normal_geodesic_point(p: &AmbientPoint, x: &UnitNormal, t: OffsetDistance) -> Result<AmbientPoint> {
    if x.basepoint().coords() != p.coords() {
        let c = dot(x.vector(), p.coords());
        if c.abs() > UNIT_TOL {
            return Err(Error::Precondition(format!(
                "normal is not orthogonal to p (inner product {c:e})"
            )));
        }
    }
    let (s, c) = t.0.sin_cos();
    let coords = p
        .coords()
        .iter()
        .zip(x.vector())
        .map(|(pi, xi)| c * pi + s * xi)
        .collect();
    Ok(AmbientPoint(coords))
}

/// Principal curvature after moving a distance `t` along the normal:
/// `(κ + tan t) / (1 − κ tan t)`.
pub fn curvature_transport(kappa: f64, t: OffsetDistance) -> Result<f64> {
    let t = t.0;
    if !(t.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Precondition(format!("|t| = {} must be below π/2", t.abs())));
    }
    // The focal distance is arctan(1/κ), on the side the normal bends toward.
    if kappa > 0.0 {
        let critical = (1.0 / kappa).atan();
        if t >= critical {
            return Err(Error::Singularity { t, critical_t: critical });
        }
    } else if kappa < 0.0 {
        let critical = (1.0 / kappa).atan();
        if t <= critical {
            return Err(Error::Singularity { t, critical_t: critical });
        }
    }
    let tan = t.tan();
    Ok((kappa + tan) / (1.0 - kappa * tan))
}

/// `T_Σ = arctan(1/κ_max)`, or `+∞` for a totally geodesic point.
pub fn embeddedness_horizon(kappas: &PrincipalCurvatureSet) -> f64 {
    let kmax = kappas.kappa_max();
    if kmax == 0.0 {
        f64::INFINITY
    } else {
        (1.0 / kmax).atan()
    }
}

/// Mean curvature `Σᵢ (κᵢ + tan t)/(1 − κᵢ tan t)` of the parallel surface.
pub fn offset_mean_curvature(kappas: &PrincipalCurvatureSet, t: OffsetDistance) -> Result<f64> {
    let horizon = embeddedness_horizon(kappas);
    if !(t.0.abs() < horizon) {
        return Err(Error::Singularity {
            t: t.0,
            critical_t: horizon.copysign(t.0),
        });
    }
    kappas.kappas().iter().map(|&k| curvature_transport(k, t)).sum()
}

/// The uniform bound `ε̃ = Λε/(Λ−ε) · (n/Λ² + 1)` on the mean curvature of
/// the parallel surfaces of a minimal surface within distance `arctan(ε/Λ²)`.
pub fn offset_mean_curvature_bound(n: usize, lambda: f64, epsilon: f64) -> Result<f64> {
    crate::constants::DimensionContext::new(n)?;
    if !(lambda > 0.0) || !(epsilon > 0.0 && epsilon <= lambda / 2.0) {
        return Err(Error::Precondition(format!(
            "need Λ > 0 and 0 < ε ≤ Λ/2, got Λ = {lambda}, ε = {epsilon}"
        )));
    }
    Ok(crate::constants::offset_mean_curvature_bound_unchecked(
        n as f64, lambda, epsilon,
    ))
}

/// Tube volume `Σ w · ∫₀^R ∏ᵢ (cos t ∓ κᵢ sin t) dt` swept by the parallel
/// surfaces on one side.
///
/// Entries are summed in order, so the result does not depend on how the
/// inner integrals are scheduled.
pub fn tube_volume(entries: &[(f64, PrincipalCurvatureSet)], radius: f64, side: Side) -> Result<f64> {
    tube_volume_with(entries, radius, side, QuadratureOptions::default())
}

pub fn tube_volume_with(
    entries: &[(f64, PrincipalCurvatureSet)],
    radius: f64,
    side: Side,
    opts: QuadratureOptions,
) -> Result<f64> {
    if !(radius >= 0.0) {
        return Err(Error::Precondition(format!("tube radius {radius} must be nonnegative")));
    }
    let sign = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let mut total = 0.0;
    let mut compensation = 0.0;
    for (i, (weight, kappas)) in entries.iter().enumerate() {
        if !(*weight >= 0.0) {
            return Err(Error::Precondition(format!("entry {i} has negative weight {weight}")));
        }
        let horizon = embeddedness_horizon(kappas);
        if radius > horizon {
            return Err(Error::BeyondHorizon { t: radius, horizon });
        }
        if radius == 0.0 || *weight == 0.0 {
            continue;
        }
        let ks = kappas.kappas();
        let inner = integrate(
            |t: f64| {
                let (s, c) = t.sin_cos();
                ks.iter().map(|k| c - sign * k * s).product::<f64>()
            },
            0.0,
            radius,
            opts,
        )?
        .value;
        // Kahan summation.
        let y = weight * inner - compensation;
        let next = total + y;
        compensation = (next - total) - y;
        total = next;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn e(i: usize) -> Vec<f64> {
        let mut v = vec![0.0; 4];
        v[i] = 1.0;
        v
    }

    #[test]
    fn geodesic_point_examples() {
        let p = AmbientPoint::new(e(0)).unwrap();
        let x = UnitNormal::new(e(1), p.clone()).unwrap();
        let q0 = normal_geodesic_point(&p, &x, OffsetDistance(0.0)).unwrap();
        assert_eq!(q0.coords(), p.coords());
        let q1 = normal_geodesic_point(&p, &x, OffsetDistance(FRAC_PI_2)).unwrap();
        assert!((q1.coords()[1] - 1.0).abs() < 1e-15 && q1.coords()[0].abs() < 1e-15);
        let q2 = normal_geodesic_point(&p, &x, OffsetDistance(FRAC_PI_4)).unwrap();
        let h = SQRT_2 / 2.0;
        assert!((q2.coords()[0] - h).abs() < 1e-15 && (q2.coords()[1] - h).abs() < 1e-15);
        assert!((q2.distance(&p) - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn non_orthonormal_inputs_rejected() {
        let p = AmbientPoint::new(e(0)).unwrap();
        assert!(UnitNormal::new(vec![0.6, 0.8, 0.0, 0.0], p.clone()).is_err());
        assert!(UnitNormal::new(vec![0.0, 0.5, 0.0, 0.0], p).is_err());
        assert!(AmbientPoint::new(vec![1.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn transport_examples() {
        assert!((curvature_transport(0.0, OffsetDistance(0.3)).unwrap() - 0.3f64.tan()).abs() < 1e-15);
        let k = curvature_transport(1.0, OffsetDistance((1.0f64 / 3.0).atan())).unwrap();
        assert!((k - 2.0).abs() < 1e-14);
        match curvature_transport(1.0, OffsetDistance(FRAC_PI_4)) {
            Err(Error::Singularity { critical_t, .. }) => assert_eq!(critical_t, FRAC_PI_4),
            other => panic!("expected singularity, got {other:?}"),
        }
        assert!(curvature_transport(-1.0, OffsetDistance(-FRAC_PI_4)).is_err());
        assert!(curvature_transport(-1.0, OffsetDistance(FRAC_PI_4 + 0.5)).is_ok());
    }

    #[test]
    fn horizon_examples() {
        let cliff = PrincipalCurvatureSet::new(vec![1.0, -1.0]);
        assert_eq!(embeddedness_horizon(&cliff), FRAC_PI_4);
        assert!(embeddedness_horizon(&PrincipalCurvatureSet::new(vec![0.0; 3])).is_infinite());
        let h = embeddedness_horizon(&PrincipalCurvatureSet::new(vec![2.0, -1.0]));
        assert!((h - 0.5f64.atan()).abs() < 1e-16);
    }

    #[test]
    fn offset_mean_curvature_examples() {
        let cliff = PrincipalCurvatureSet::new(vec![1.0, -1.0]);
        for &t in &[0.0, 0.1, 0.3, 0.7, -0.5] {
            let h = offset_mean_curvature(&cliff, OffsetDistance(t)).unwrap();
            assert!((h - 2.0 * (2.0 * t).tan()).abs() < 1e-13, "t={t}");
        }
        let r = 1.1f64;
        let sph = PrincipalCurvatureSet::new(vec![1.0 / r.tan(); 2]);
        for &t in &[0.1, 0.5, -0.3] {
            let h = offset_mean_curvature(&sph, OffsetDistance(t)).unwrap();
            assert!((h - 2.0 / (r - t).tan()).abs() < 1e-12);
        }
        assert!(offset_mean_curvature(&cliff, OffsetDistance(0.8)).is_err());
    }

    #[test]
    fn mean_curvature_bound_examples() {
        let b = offset_mean_curvature_bound(2, SQRT_2, SQRT_2 / 3.0).unwrap();
        assert!((b - SQRT_2).abs() < 1e-14);
        let d_eps = (SQRT_2 / 3.0 / 2.0f64).atan();
        let cliff = PrincipalCurvatureSet::new(vec![1.0, -1.0]);
        let h = offset_mean_curvature(&cliff, OffsetDistance(d_eps)).unwrap();
        assert!((h - 0.998_268_396_969_243_6).abs() < 1e-13);
        assert!(h <= b);
        let extreme = offset_mean_curvature_bound(2, SQRT_2, SQRT_2 / 2.0).unwrap();
        assert!((extreme - 2.0 * SQRT_2).abs() < 1e-14);
        assert!(offset_mean_curvature_bound(2, SQRT_2, SQRT_2).is_err());
    }

    #[test]
    fn tube_volume_examples() {
        let equator = vec![(4.0 * PI, PrincipalCurvatureSet::new(vec![0.0, 0.0]))];
        for side in [Side::Plus, Side::Minus] {
            let v = tube_volume(&equator, FRAC_PI_2, side).unwrap();
            assert!((v - PI * PI).abs() < 1e-9);
        }
        let cliff = vec![(2.0 * PI * PI, PrincipalCurvatureSet::new(vec![1.0, -1.0]))];
        let total = tube_volume(&cliff, FRAC_PI_4, Side::Plus).unwrap()
            + tube_volume(&cliff, FRAC_PI_4, Side::Minus).unwrap();
        assert!((total - 2.0 * PI * PI).abs() < 1e-9);
        assert_eq!(tube_volume(&cliff, 0.0, Side::Plus).unwrap(), 0.0);
        assert!(matches!(
            tube_volume(&cliff, 0.9, Side::Plus),
            Err(Error::BeyondHorizon { .. })
        ));
    }

    proptest! {
        #[test]
        fn transport_composes(k in -5.0f64..5.0, s in -0.7f64..0.7, t in -0.7f64..0.7) {
            let direct = curvature_transport(k, OffsetDistance(s + t));
            let first = curvature_transport(k, OffsetDistance(s));
            if let (Ok(direct), Ok(first)) = (direct, first) {
                if let Ok(two) = curvature_transport(first, OffsetDistance(t)) {
                    let scale = 1.0 + direct.abs();
                    // Conditioning degrades near focal points; stay away from them.
                    prop_assume!(direct.abs() < 1e3 && first.abs() < 1e3);
                    prop_assert!((two - direct).abs() <= 1e-12 * scale * scale);
                }
            }
        }

        #[test]
        fn transport_is_tangent_addition(k in -5.0f64..5.0, t in -1.2f64..1.2) {
            if let Ok(v) = curvature_transport(k, OffsetDistance(t)) {
                let angle = k.atan() + t;
                prop_assume!(angle.abs() < 1.5);
                prop_assert!((v - angle.tan()).abs() <= 1e-12 * (1.0 + v * v));
            }
        }

        #[test]
        fn offsets_of_minimal_sets_are_strictly_mean_convex(
            k in 0.05f64..4.0, frac in 0.01f64..0.99, n in 2usize..6
        ) {
            // A minimal set: n−1 curvatures balanced by one.
            let mut ks: Vec<f64> = (0..n - 1).map(|i| k * (1.0 + i as f64) / n as f64).collect();
            let sum: f64 = ks.iter().sum();
            ks.push(-sum);
            let set = PrincipalCurvatureSet::new(ks);
            let t = frac * embeddedness_horizon(&set);
            let h = offset_mean_curvature(&set, OffsetDistance(t)).unwrap();
            let tan = t.tan();
            let floor = (n as f64 + set.norm().powi(2)) * tan * (1.0 - set.kappa_max() * tan);
            prop_assert!(h > 0.0);
            prop_assert!(h >= floor * (1.0 - 1e-12));
        }

        #[test]
        fn horizon_shrinks_under_scaling(k1 in -4.0f64..4.0, k2 in -4.0f64..4.0, s in 1.0f64..10.0) {
            let set = PrincipalCurvatureSet::new(vec![k1, k2]);
            prop_assert!(embeddedness_horizon(&set.scaled(s)) <= embeddedness_horizon(&set));
        }

        #[test]
        fn minimal_simplification_agrees(k in -3.0f64..3.0, frac in -0.95f64..0.95) {
            let set = PrincipalCurvatureSet::new(vec![k, -k]);
            let t = frac * embeddedness_horizon(&set).min(1.5);
            let raw = offset_mean_curvature(&set, OffsetDistance(t)).unwrap();
            let tan = t.tan();
            let simplified: f64 = set.kappas().iter().map(|k| (1.0 + k * k) * tan / (1.0 - k * tan)).sum();
            prop_assert!((raw - simplified).abs() <= 1e-10 * (1.0 + raw.abs()));
        }
    }
}
