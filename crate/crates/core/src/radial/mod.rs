//! One-dimensional reductions of the volumetric identities on rotationally
//! symmetric domains of `Sⁿ⁺¹`.
//!
//! For a function of the geodesic distance `r` from a point,
//! `Δg = g″ + n cot r · g′`, `|∇g|² = g′²`,
//! `|∇²g|² = g″² + n (cot r · g′)²`, and the volume element is
//! `ωₙ sinⁿ r dr` with `ωₙ = Vol(Sⁿ)`.

mod hemisphere;
pub mod ode;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::sphere_volume;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};

pub use hemisphere::{
    solve_hemisphere_extension, solve_hemisphere_extension_log, verify_choiwang_chain_hemisphere,
    verify_choiwang_chain_hemisphere_with,
    ChoiWangReport, HemisphereExtension,
};

/// Where a radial profile lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadialDomain {
    /// Geodesic ball `r ∈ [0, R]`.
    Ball { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    /// Closed hemisphere, `θ ∈ [0, π/2]` measured from the pole.
    Hemisphere,
}

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A `C²` function of one radial variable with its first two derivatives.
#[derive(Clone)]
pub struct RadialProfile {
    pub label: String,
    f: Scalar,
    df: Scalar,
    d2f: Scalar,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile").field("label", &self.label).finish_non_exhaustive()
    }
}

impl RadialProfile {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
            df: Arc::new(df),
            d2f: Arc::new(d2f),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| c, |_| 0.0, |_| 0.0)
    }

    pub fn f(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    pub fn df(&self, r: f64) -> f64 {
        (self.df)(r)
    }

    pub fn d2f(&self, r: f64) -> f64 {
        (self.d2f)(r)
    }

    pub fn laplacian(&self, n: usize, r: f64) -> f64 {
        self.d2f(r) + n as f64 * cot(r) * self.df(r)
    }

    pub fn hessian_norm_sq(&self, n: usize, r: f64) -> f64 {
        let t = cot(r) * self.df(r);
        self.d2f(r).powi(2) + n as f64 * t * t
    }

    /// Ball-domain profiles used by the Reilly check; each has `f′(0) = 0`.
    pub fn ball_test_profiles() -> Vec<RadialProfile> {
        vec![
            RadialProfile::constant(1.5),
            RadialProfile::new("cos r", f64::cos, |r| -r.sin(), |r| -r.cos()),
            RadialProfile::new("r^2", |r| r * r, |r| 2.0 * r, |_| 2.0),
            RadialProfile::new(
                "exp(-r^2)",
                |r| (-r * r).exp(),
                |r| -2.0 * r * (-r * r).exp(),
                |r| (4.0 * r * r - 2.0) * (-r * r).exp(),
            ),
            RadialProfile::new("r^4 - r^2", |r| r.powi(4) - r * r, |r| 4.0 * r.powi(3) - 2.0 * r, |r| {
                12.0 * r * r - 2.0
            }),
            RadialProfile::new("cos 3r", |r| (3.0 * r).cos(), |r| -3.0 * (3.0 * r).sin(), |r| {
                -9.0 * (3.0 * r).cos()
            }),
        ]
    }

    /// The radial harmonic with `v′ = sin⁻ⁿ r` (defined up to a constant;
    /// `f` is not used by any check and is left at zero).
    pub fn radial_harmonic(n: usize) -> Self {
        let nf = n as f64;
        Self::new(
            format!("harmonic n={n}"),
            |_| f64::NAN,
            move |r| r.sin().powf(-nf),
            move |r| -nf * r.cos() * r.sin().powf(-nf - 1.0),
        )
    }
}

fn cot(r: f64) -> f64 {
    r.cos() / r.sin()
}

/// `ωₙ sinⁿ r`, the area of the geodesic sphere of radius `r` in `Sⁿ⁺¹`.
pub fn ball_volume_element(n: usize, r: f64) -> f64 {
    sphere_volume(n) * r.sin().powi(n as i32)
}

/// Two sides of an identity and their discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// The gap must not exceed this.
    pub threshold: f64,
    pub passed: bool,
}

impl IdentityReport {
    fn new(lhs: f64, rhs: f64, threshold_rel: f64) -> Self {
        let gap = (lhs - rhs).abs();
        let threshold = threshold_rel * (1.0 + lhs.abs());
        Self {
            lhs,
            rhs,
            gap,
            threshold,
            passed: gap <= threshold,
        }
    }
}

/// `lhs ≤ rhs`, with `slack = rhs − lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Allowed negative slack from quadrature error.
    pub tolerance: f64,
    pub passed: bool,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            lhs,
            rhs,
            slack,
            tolerance,
            passed: slack >= -tolerance,
        }
    }

    /// `lhs / rhs`, or zero when both sides vanish.
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 && self.rhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Tolerances shared by the radial checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleTolerance {
    pub quadrature: f64,
}

impl Default for OracleTolerance {
    fn default() -> Self {
        Self { quadrature: 1e-10 }
    }
}

impl OracleTolerance {
    /// Relative threshold for identities: `max(1e-8, 100·tol)`.
    pub fn identity_rel(&self) -> f64 {
        (100.0 * self.quadrature).max(1e-8)
    }

    fn quad(&self) -> QuadratureOptions {
        QuadratureOptions::with_tol(self.quadrature)
    }
}

pub(crate) fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: &OracleTolerance) -> Result<f64> {
    integrate(f, a, b, tol.quad()).map(|r| r.value)
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("dimension n = {n} must be at least 2")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BochnerReport {
    pub n: usize,
    pub points: usize,
    /// Largest `|Δ|∇v|² − 2|∇²v|² − 2n|∇v|²| / (1 + |Δ|∇v|²|)` with the
    /// Laplacian from closed-form derivatives.
    pub max_residual: f64,
    /// Same, with `(|∇v|²)″` from a five-point finite difference.
    pub max_fd_residual: f64,
    pub passed: bool,
}

/// Checks `Δ|∇v|² = 2|∇²v|² + 2n|∇v|²` for the radial harmonic on `[r₀, R]`.
pub fn verify_bochner_radial(n: usize, r0: f64, r1: f64) -> Result<BochnerReport> {
    check_dim(n)?;
    let nf = n as f64;
    let v1 = move |r: f64| r.sin().powf(-nf);
    let v2 = move |r: f64| -nf * r.cos() * r.sin().powf(-nf - 1.0);
    let v3 = move |r: f64| {
        let s = r.sin();
        nf * s.powf(-nf) + nf * (nf + 1.0) * r.cos().powi(2) * s.powf(-nf - 2.0)
    };
    verify_bochner_with(n, r0, r1, v1, v2, v3)
}

/// Bochner check for any radial harmonic given `v′, v″, v‴`.
pub fn verify_bochner_with(
    n: usize,
    r0: f64,
    r1: f64,
    v1: impl Fn(f64) -> f64,
    v2: impl Fn(f64) -> f64,
    v3: impl Fn(f64) -> f64,
) -> Result<BochnerReport> {
    check_dim(n)?;
    if !(0.0 < r0 && r0 < r1 && r1 < std::f64::consts::PI) {
        return Err(Error::Precondition(format!("need 0 < r₀ < R < π, got [{r0}, {r1}]")));
    }
    const POINTS: usize = 10_000;
    const FD_STEP: f64 = 2e-4;
    let nf = n as f64;
    let g = |r: f64| v1(r).powi(2);
    let (mut max_residual, mut max_fd_residual) = (0.0f64, 0.0f64);
    for i in 0..POINTS {
        let r = r0 + (r1 - r0) * i as f64 / (POINTS - 1) as f64;
        let (a, b, c) = (v1(r), v2(r), v3(r));
        let dg = 2.0 * a * b;
        let ddg = 2.0 * b * b + 2.0 * a * c;
        let hess = b * b + nf * (a * cot(r)).powi(2);
        let rhs = 2.0 * hess + 2.0 * nf * a * a;
        let lhs = ddg + nf * cot(r) * dg;
        max_residual = max_residual.max((lhs - rhs).abs() / (1.0 + lhs.abs()));

        // Keep the stencil inside the open interval (0, π).
        let h = FD_STEP.min(0.25 * r).min(0.25 * (std::f64::consts::PI - r));
        let ddg_fd = (-g(r + 2.0 * h) + 16.0 * g(r + h) - 30.0 * g(r) + 16.0 * g(r - h) - g(r - 2.0 * h))
            / (12.0 * h * h);
        let lhs_fd = ddg_fd + nf * cot(r) * dg;
        max_fd_residual = max_fd_residual.max((lhs_fd - rhs).abs() / (1.0 + lhs_fd.abs()));
    }
    Ok(BochnerReport {
        n,
        points: POINTS,
        max_residual,
        max_fd_residual,
        passed: max_residual <= 1e-6 && max_fd_residual <= 1e-6,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReillyReport {
    pub n: usize,
    pub radius: f64,
    pub profile: String,
    /// `∫ n f′² dv`.
    pub interior_term: f64,
    /// `n cot R · f′(R)² · Area(∂B_R)`.
    pub boundary_term: f64,
    pub identity: IdentityReport,
}

/// Reilly's formula on the geodesic ball `B_R` for a radial `f`:
/// `∫((Δf)² − |∇²f|²) = ∫ n|∇f|² + n cot R · f′(R)² · Area(∂B_R)`.
///
/// Radial data is constant on the boundary, so the tangential terms vanish.
/// The boundary mean curvature enters as `−H u_ν²` with `H = −n cot R` for
/// the sign convention under which the identity is exact.
pub fn verify_reilly_radial(n: usize, radius: f64, f: &RadialProfile) -> Result<ReillyReport> {
    verify_reilly_radial_with(n, radius, f, OracleTolerance::default())
}

pub fn verify_reilly_radial_with(
    n: usize,
    radius: f64,
    f: &RadialProfile,
    tol: OracleTolerance,
) -> Result<ReillyReport> {
    check_dim(n)?;
    if !(radius > 0.0 && radius < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Precondition(format!("ball radius {radius} must lie in (0, π/2)")));
    }
    let d0 = f.df(0.0);
    if d0.abs() > 1e-12 {
        return Err(Error::Precondition(format!("profile {} has f′(0) = {d0} ≠ 0", f.label)));
    }
    let nf = n as f64;
    // (Δf)² − |∇²f|² = 2n cot f′f″ + n(n−1) cot² f′², written without the
    // 1/r singularity of cot at the centre.
    let lhs = quad(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            let lap = f.laplacian(n, r);
            (lap * lap - f.hessian_norm_sq(n, r)) * ball_volume_element(n, r)
        },
        0.0,
        radius,
        &tol,
    )?;
    let interior_term = quad(|r| nf * f.df(r).powi(2) * ball_volume_element(n, r), 0.0, radius, &tol)?;
    let boundary_term = nf * cot(radius) * f.df(radius).powi(2) * ball_volume_element(n, radius);
    Ok(ReillyReport {
        n,
        radius,
        profile: f.label.clone(),
        interior_term,
        boundary_term,
        identity: IdentityReport::new(lhs, interior_term + boundary_term, tol.identity_rel()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorGradientReport {
    pub n: usize,
    pub inner: f64,
    pub outer: f64,
    pub t: f64,
    /// `∫_{Ω^{2t}} |∇v|²` against `t⁻²/(n−1) ∫_Ω |∇²v|²`.
    pub inequality: InequalityReport,
    pub ratio: f64,
}

/// The interior gradient estimate on the annulus `Ω = [r₀, R]` for the
/// radial harmonic, with `Ω^{2t} = [r₀ + 2t, R − 2t]`.
pub fn verify_interior_gradient_radial(n: usize, r0: f64, r1: f64, t: f64) -> Result<InteriorGradientReport> {
    verify_interior_gradient_with(n, r0, r1, t, &RadialProfile::radial_harmonic(n), OracleTolerance::default())
}

pub fn verify_interior_gradient_with(
    n: usize,
    r0: f64,
    r1: f64,
    t: f64,
    v: &RadialProfile,
    tol: OracleTolerance,
) -> Result<InteriorGradientReport> {
    check_dim(n)?;
    if !(0.0 < r0 && r0 < r1 && r1 < std::f64::consts::PI) {
        return Err(Error::Precondition(format!("need 0 < r₀ < R < π, got [{r0}, {r1}]")));
    }
    if !(t > 0.0 && 2.0 * t < (r1 - r0) / 2.0) {
        return Err(Error::Precondition(format!(
            "need 0 < 2t < (R − r₀)/2, got t = {t} on [{r0}, {r1}]"
        )));
    }
    let lhs = quad(|r| v.df(r).powi(2) * ball_volume_element(n, r), r0 + 2.0 * t, r1 - 2.0 * t, &tol)?;
    let hess = quad(|r| v.hessian_norm_sq(n, r) * ball_volume_element(n, r), r0, r1, &tol)?;
    let rhs = hess / ((n as f64 - 1.0) * t * t);
    let inequality = InequalityReport::new(lhs, rhs, tol.identity_rel() * (1.0 + lhs.abs()));
    Ok(InteriorGradientReport {
        n,
        inner: r0,
        outer: r1,
        t,
        ratio: inequality.ratio(),
        inequality,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLayerReport {
    pub n: usize,
    pub t: f64,
    pub beta: f64,
    /// `n tan t`, the largest mean curvature of the parallel spheres used.
    pub mean_curvature_bound: f64,
    pub boundary_gradient: f64,
    pub parallel_gradient: f64,
    pub band_gradient: f64,
    pub band_hessian: f64,
    pub inequality: InequalityReport,
}

/// The boundary-layer estimate
/// `∫_Σ |∇v|² ≤ ∫_{Σᵗ} |∇v|² + (ε̃ + β) ∫_{band} |∇v|² + β⁻¹ ∫_{band} |∇²v|²`
/// on the hemisphere bounded by the equator `Σ`, where `Σᵗ` is the parallel
/// sphere at polar angle `π/2 − t` and `ε̃ = n tan t`.
///
/// `v` is a function of the polar angle.
pub fn verify_boundary_layer_hemisphere(n: usize, t: f64, beta: f64, v: &RadialProfile) -> Result<BoundaryLayerReport> {
    verify_boundary_layer_hemisphere_with(n, t, beta, v, OracleTolerance::default())
}

pub fn verify_boundary_layer_hemisphere_with(
    n: usize,
    t: f64,
    beta: f64,
    v: &RadialProfile,
    tol: OracleTolerance,
) -> Result<BoundaryLayerReport> {
    check_dim(n)?;
    use std::f64::consts::FRAC_PI_2;
    if !(t > 0.0 && t < FRAC_PI_2) {
        return Err(Error::Precondition(format!("need 0 < t < π/2, got {t}")));
    }
    if !(beta > 0.0) {
        return Err(Error::Precondition(format!("β = {beta} must be positive")));
    }
    let eps_tilde = n as f64 * t.tan();
    let boundary_gradient = v.df(FRAC_PI_2).powi(2) * ball_volume_element(n, FRAC_PI_2);
    let theta_t = FRAC_PI_2 - t;
    let parallel_gradient = v.df(theta_t).powi(2) * ball_volume_element(n, theta_t);
    let band_gradient = quad(|r| v.df(r).powi(2) * ball_volume_element(n, r), theta_t, FRAC_PI_2, &tol)?;
    let band_hessian = quad(|r| v.hessian_norm_sq(n, r) * ball_volume_element(n, r), theta_t, FRAC_PI_2, &tol)?;
    let rhs = parallel_gradient + (eps_tilde + beta) * band_gradient + band_hessian / beta;
    let lhs = boundary_gradient;
    Ok(BoundaryLayerReport {
        n,
        t,
        beta,
        mean_curvature_bound: eps_tilde,
        boundary_gradient,
        parallel_gradient,
        band_gradient,
        band_hessian,
        inequality: InequalityReport::new(lhs, rhs, tol.identity_rel() * (1.0 + lhs.abs())),
    })
}
