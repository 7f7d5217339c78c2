//! Harmonic extension of a first eigenfunction of the equator into the
//! hemisphere, and the integral chain built on it.
//!
//! With `u = F(θ) Y(ω)`, `Y` a unit-L² degree-one harmonic on the equator
//! `Sⁿ` (so `∫Y² = 1`, `∫|∇Y|² = n`), harmonicity of `u` is the ODE
//! `F″ + n cot θ F′ − n F / sin²θ = 0` with `F(π/2) = 1`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::ode::{dopri5, rk4, AdaptiveOptions, QuinticHermite};
use super::{check_dim, quad, IdentityReport, InequalityReport, OracleTolerance};
use crate::error::{Error, Result};

/// Start of the integration, away from the regular singular point `θ = 0`.
pub const THETA0: f64 = 1e-4;

/// The regular solution, interpolated piecewise between accepted steps.
#[derive(Debug, Clone)]
pub struct HemisphereExtension {
    pub n: usize,
    knots: Vec<f64>,
    /// Per step: interpolants of `F` and of `F′`.
    pieces: Vec<(QuinticHermite, QuinticHermite)>,
    /// Coefficient `a` of the series `F = c(θ + aθ³ + …)` near the pole.
    series_a: f64,
    series_c: f64,
}

fn second(n: f64, t: f64, f: f64, df: f64) -> f64 {
    let s = t.sin();
    -n * t.cos() / s * df + n * f / (s * s)
}

fn third(n: f64, t: f64, f: f64, df: f64, d2f: f64) -> f64 {
    let (s, c) = t.sin_cos();
    2.0 * n * df / (s * s) - n * c / s * d2f - 2.0 * n * c * f / (s * s * s)
}

impl HemisphereExtension {
    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn piece(&self, theta: f64) -> &(QuinticHermite, QuinticHermite) {
        let i = self.knots.partition_point(|&k| k <= theta).clamp(1, self.pieces.len());
        &self.pieces[i - 1]
    }

    pub fn f(&self, theta: f64) -> f64 {
        if theta < THETA0 {
            return self.series_c * (theta + self.series_a * theta.powi(3));
        }
        self.piece(theta).0.value(theta)
    }

    pub fn df(&self, theta: f64) -> f64 {
        if theta < THETA0 {
            return self.series_c * (1.0 + 3.0 * self.series_a * theta * theta);
        }
        self.piece(theta).1.value(theta)
    }

    /// `F″` from the ODE.
    pub fn d2f(&self, theta: f64) -> f64 {
        if theta < THETA0 {
            return self.series_c * 6.0 * self.series_a * theta;
        }
        second(self.nf(), theta, self.f(theta), self.df(theta))
    }

    /// `F″ + n cot θ F′ − nF/sin²θ` with `F″` from differentiating the
    /// interpolant of `F′`, an independent check on the stored solution.
    pub fn ode_residual(&self, theta: f64) -> f64 {
        let d2 = self.piece(theta).1.derivative(theta);
        d2 - second(self.nf(), theta, self.f(theta), self.df(theta))
    }

    pub fn steps(&self) -> usize {
        self.pieces.len()
    }

    /// Step boundaries, for piecewise quadrature.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }
}

/// Integrates the regular branch from `θ₀ = 10⁻⁴` with the series data
/// `F = θ + aθ³`, `a = n / (3(n + 3))`, then rescales to `F(π/2) = 1`.
pub fn solve_hemisphere_extension(n: usize) -> Result<HemisphereExtension> {
    check_dim(n)?;
    let nf = n as f64;
    let a = nf / (3.0 * (nf + 3.0));
    let y0 = [THETA0 + a * THETA0.powi(3), 1.0 + 3.0 * a * THETA0 * THETA0];
    let rhs = |t: f64, y: &[f64; 2]| [y[1], second(nf, t, y[0], y[1])];
    let traj = dopri5(
        rhs,
        THETA0,
        y0,
        FRAC_PI_2,
        AdaptiveOptions {
            initial_step: 1e-6,
            ..AdaptiveOptions::default()
        },
    )?;
    let scale = 1.0 / traj.y.last().unwrap()[0];
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Ode("extension does not reach a positive value at the equator".into()));
    }
    let ys: Vec<[f64; 2]> = traj.y.iter().map(|y| [y[0] * scale, y[1] * scale]).collect();
    let mut pieces = Vec::with_capacity(ys.len() - 1);
    for i in 0..ys.len() - 1 {
        let (t0, t1) = (traj.t[i], traj.t[i + 1]);
        let jet = |t: f64, y: &[f64; 2]| {
            let d2 = second(nf, t, y[0], y[1]);
            ([y[0], y[1], d2], [y[1], d2, third(nf, t, y[0], y[1], d2)])
        };
        let (f0, g0) = jet(t0, &ys[i]);
        let (f1, g1) = jet(t1, &ys[i + 1]);
        pieces.push((QuinticHermite::new(t0, t1, f0, f1), QuinticHermite::new(t0, t1, g0, g1)));
    }
    Ok(HemisphereExtension {
        n,
        knots: traj.t,
        pieces,
        series_a: a,
        series_c: scale,
    })
}

/// Independent solve in `x = ln tan(θ/2)`, where the ODE becomes
/// `G″ = (n−1) tanh(x) G′ + nG`, by fixed-step RK4 from `x = −20` with
/// `G = G′ = eˣ`. Returns samples `(θ, F, F′)` normalised to `F(π/2) = 1`.
pub fn solve_hemisphere_extension_log(n: usize, step: f64) -> Result<Vec<(f64, f64, f64)>> {
    check_dim(n)?;
    let nf = n as f64;
    let x0: f64 = -20.0;
    let traj = rk4(
        |x, y: &[f64; 2]| [y[1], (nf - 1.0) * x.tanh() * y[1] + nf * y[0]],
        x0,
        [x0.exp(), x0.exp()],
        0.0,
        step,
    );
    let scale = 1.0 / traj.y.last().unwrap()[0];
    Ok(traj
        .t
        .iter()
        .zip(&traj.y)
        .map(|(&x, y)| {
            let theta = 2.0 * x.exp().atan();
            // dθ/dx = sin θ.
            (theta, y[0] * scale, y[1] * scale / theta.sin())
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiWangReport {
    pub n: usize,
    /// λ₁ of the equator.
    pub lambda1: f64,
    pub dirichlet_energy: f64,
    pub hessian_energy: f64,
    pub normal_derivative: f64,
    /// `∫_Σ |∇u|² = F′(π/2)² + n`.
    pub boundary_gradient: f64,
    /// `∫_Σ u_ν u = ∫ |∇u|²`.
    pub green_identity: IdentityReport,
    /// `−∫|∇²u|² ≥ n∫|∇u|² − 2λ₁ ∫_Σ u_ν u`.
    pub reilly_inequality: InequalityReport,
    /// `2(λ₁ − n/2) ∫|∇u|² ≥ ∫|∇²u|²`.
    pub choi_wang_inequality: InequalityReport,
    /// `∫|∇²u|² ≥ 0`, whose slack is the dropped Hessian term.
    pub hessian_nonnegative: InequalityReport,
    /// `∫_Σ |∇u|² ≥ √(2n) ∫|∇u|²`.
    pub boundary_gradient_inequality: InequalityReport,
    /// `∫_Σ |∇u|² ≥ λ₁ + (∫|∇u|²)² ≥ 2√λ₁ ∫|∇u|²`.
    pub young_chain: [InequalityReport; 2],
    /// Sup-norm distance to the independent log-variable solution.
    pub integrator_agreement: f64,
    pub max_ode_residual: f64,
}

impl ChoiWangReport {
    pub fn passed(&self) -> bool {
        self.green_identity.passed
            && self.reilly_inequality.passed
            && self.choi_wang_inequality.passed
            && self.hessian_nonnegative.passed
            && self.boundary_gradient_inequality.passed
            && self.young_chain.iter().all(|r| r.passed)
            && self.integrator_agreement <= 1e-7
            && self.max_ode_residual <= 1e-8
    }
}

/// Integrates over `[0, π/2]` one solver step at a time, so every
/// quadrature panel sees a single smooth interpolant.
fn piecewise(ext: &HemisphereExtension, f: impl Fn(f64) -> f64, tol: &OracleTolerance) -> Result<f64> {
    let k = ext.knots();
    let per = OracleTolerance {
        quadrature: tol.quadrature / (k.len() as f64),
    };
    let mut total = quad(&f, 0.0, k[0], &per)?;
    for w in k.windows(2) {
        total += quad(&f, w[0], w[1], &per)?;
    }
    Ok(total)
}

pub fn verify_choiwang_chain_hemisphere(n: usize) -> Result<ChoiWangReport> {
    verify_choiwang_chain_hemisphere_with(n, OracleTolerance::default())
}

pub fn verify_choiwang_chain_hemisphere_with(n: usize, tol: OracleTolerance) -> Result<ChoiWangReport> {
    let ext = solve_hemisphere_extension(n)?;
    let nf = n as f64;
    let lambda1 = nf;

    let dirichlet_energy = piecewise(
        &ext,
        |t| {
            if t == 0.0 {
                return 0.0;
            }
            let s = t.sin();
            let (f, df) = (ext.f(t), ext.df(t));
            (df * df + nf * f * f / (s * s)) * s.powi(n as i32)
        },
        &tol,
    )?;
    let hessian_energy = piecewise(
        &ext,
        |t| {
            if t == 0.0 {
                return 0.0;
            }
            let (s, c) = t.sin_cos();
            let cot = c / s;
            let (f, df, d2f) = (ext.f(t), ext.df(t), ext.d2f(t));
            let mixed = df - cot * f;
            let tangential = cot * df - f / (s * s);
            (d2f * d2f + 2.0 * nf * mixed * mixed / (s * s) + nf * tangential * tangential) * s.powi(n as i32)
        },
        &tol,
    )?;
    let normal_derivative = ext.df(FRAC_PI_2);
    let boundary_value = ext.f(FRAC_PI_2);
    let boundary_gradient = normal_derivative.powi(2) + nf * boundary_value.powi(2);
    let flux = normal_derivative * boundary_value;

    let rel = tol.identity_rel();
    let slack_tol = |x: f64| rel * (1.0 + x.abs());
    let green_identity = IdentityReport::new(flux, dirichlet_energy, rel);
    let reilly_rhs = nf * dirichlet_energy - 2.0 * lambda1 * flux;
    let reilly_inequality = InequalityReport::new(reilly_rhs, -hessian_energy, slack_tol(hessian_energy));
    let choi_wang_inequality = InequalityReport::new(
        hessian_energy,
        2.0 * (lambda1 - nf / 2.0) * dirichlet_energy,
        slack_tol(hessian_energy),
    );
    let hessian_nonnegative = InequalityReport::new(0.0, hessian_energy, 0.0);
    let boundary_gradient_inequality = InequalityReport::new(
        (2.0 * nf).sqrt() * dirichlet_energy,
        boundary_gradient,
        slack_tol(boundary_gradient),
    );
    let middle = lambda1 + dirichlet_energy * dirichlet_energy;
    let young_chain = [
        InequalityReport::new(middle, boundary_gradient, slack_tol(boundary_gradient)),
        InequalityReport::new(2.0 * lambda1.sqrt() * dirichlet_energy, middle, slack_tol(middle)),
    ];

    let mut integrator_agreement = 0.0f64;
    for (theta, f, df) in solve_hemisphere_extension_log(n, 1e-3)? {
        if theta >= 0.01 {
            integrator_agreement = integrator_agreement
                .max((f - ext.f(theta)).abs())
                .max((df - ext.df(theta)).abs());
        }
    }
    let max_ode_residual = (0..=2000)
        .map(|i| 0.01 + (FRAC_PI_2 - 0.01) * i as f64 / 2000.0)
        .map(|t| ext.ode_residual(t).abs())
        .fold(0.0, f64::max);

    Ok(ChoiWangReport {
        n,
        lambda1,
        dirichlet_energy,
        hessian_energy,
        normal_derivative,
        boundary_gradient,
        green_identity,
        reilly_inequality,
        choi_wang_inequality,
        hessian_nonnegative,
        boundary_gradient_inequality,
        young_chain,
        integrator_agreement,
        max_ode_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_is_positive_and_increasing() {
        for n in 2..=4 {
            let ext = solve_hemisphere_extension(n).unwrap();
            assert!((ext.f(FRAC_PI_2) - 1.0).abs() < 1e-15);
            for i in 1..=500 {
                let t = FRAC_PI_2 * i as f64 / 500.0;
                assert!(ext.f(t) > 0.0 && ext.df(t) > 0.0, "n={n}, θ={t}");
            }
            assert!(ext.df(FRAC_PI_2) > 0.0);
        }
    }

    #[test]
    fn ode_residual_and_second_integrator() {
        let ext = solve_hemisphere_extension(2).unwrap();
        for i in 0..=400 {
            let t = 0.01 + (FRAC_PI_2 - 0.01) * i as f64 / 400.0;
            assert!(ext.ode_residual(t).abs() <= 1e-8, "θ={t}: {}", ext.ode_residual(t));
        }
        let log = solve_hemisphere_extension_log(2, 1e-3).unwrap();
        for (t, f, _) in log.iter().filter(|s| s.0 > 0.01) {
            assert!((f - ext.f(*t)).abs() <= 1e-7);
        }
    }

    #[test]
    fn n2_chain() {
        let r = verify_choiwang_chain_hemisphere(2).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(r.green_identity.gap <= 1e-8);
        assert!(r.hessian_nonnegative.slack > 0.0);
        // On the hemisphere the Reilly and Choi–Wang steps are equalities.
        assert!((r.hessian_energy - 2.0 * r.dirichlet_energy).abs() < 1e-8);
    }

    #[test]
    fn chain_holds_for_small_dimensions() {
        for n in 2..=4 {
            assert!(verify_choiwang_chain_hemisphere(n).unwrap().passed());
        }
    }
}
