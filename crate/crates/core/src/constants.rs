//! Explicit constants of the eigenvalue bound and the mean-convex volume bound.
//!
//! Everything here is a pure function of the dimension `n` of the
//! hypersurface (ambient sphere `Sⁿ⁺¹`) and of the curvature bound `Λ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};

/// Dimension of the hypersurface; the ambient sphere is `Sⁿ⁺¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionContext {
    n: usize,
}

impl DimensionContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension n = {n} must be at least 2")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }
}

/// `n^{3/2} · arctan³(1/(3√n))`, which lies in `[7/200, 1/27]` for `n ≥ 2`.
pub fn arctan_cubed_factor(n: usize) -> Result<f64> {
    let dim = DimensionContext::new(n)?;
    let nf = dim.nf();
    Ok(nf.powf(1.5) * (1.0 / (3.0 * nf.sqrt())).atan().powi(3))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub n: usize,
    pub a_n: f64,
    pub b_n: f64,
    pub c_n: f64,
}

impl BoundConstants {
    /// Simplified lower bound `(n−1)n²/32000` on `a_n`.
    pub fn a_floor(&self) -> f64 {
        let n = self.n as f64;
        (n - 1.0) * n * n / 32000.0
    }

    /// Simplified upper bound `5n²/216` on `b_n`.
    pub fn b_ceiling(&self) -> f64 {
        let n = self.n as f64;
        5.0 * n * n / 216.0
    }

    /// `25/3 · (5/4)^{n−2}`.
    pub fn c_ceiling(&self) -> f64 {
        25.0 / 3.0 * 1.25f64.powi(self.n as i32 - 2)
    }
}

/// The constants `a_n`, `b_n` obtained from the default parameter choice
/// `ε = √n/3`, `β = √n/20`, and the volume constant `c_n`.
pub fn compute_bound_constants(n: usize) -> Result<BoundConstants> {
    let dim = DimensionContext::new(n)?;
    let nf = dim.nf();
    let cube = (1.0 / (3.0 * nf.sqrt())).atan().powi(3);
    let n72 = nf.powf(3.5);
    Ok(BoundConstants {
        n,
        a_n: 3.0 * (nf - 1.0) * n72 / 3200.0 * cube,
        b_n: 5.0 * n72 / 8.0 * cube,
        c_n: 25.0 / 3.0 * 1.25f64.powi(n as i32 - 2),
    })
}

/// Relative width of the band below `√n` still treated as `Λ = √n`.
pub const SQRT_N_REL_TOL: f64 = 1e-8;

/// Lower bound on `λ₁(Σ)` for a closed embedded minimal `Σⁿ ⊂ Sⁿ⁺¹` with
/// `max ‖A‖ ≤ Λ`.
///
/// Below `Λ = √n` the surface is totally geodesic and the exact value `n` is
/// returned. Values within a relative [`SQRT_N_REL_TOL`] under `√n` count as
/// `√n`: measured or rounded curvature must not flip the branch.
pub fn eigenvalue_lower_bound(n: usize, lambda: f64) -> Result<f64> {
    let dim = DimensionContext::new(n)?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("Λ = {lambda} must be finite and nonnegative")));
    }
    let nf = dim.nf();
    if lambda < nf.sqrt() * (1.0 - SQRT_N_REL_TOL) {
        return Ok(nf);
    }
    let c = compute_bound_constants(n)?;
    Ok(nf / 2.0 + c.a_n / (lambda.powi(6) + c.b_n))
}

/// Auxiliary scalars of the proof for a given `(n, Λ, ε, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterChain {
    pub dim: DimensionContext,
    pub lambda: f64,
    pub epsilon: f64,
    pub beta: f64,
    /// Mean-curvature bound on the parallel hypersurfaces within `D_ε`.
    pub epsilon_tilde: f64,
    pub gamma: f64,
    pub delta: f64,
    pub t: f64,
    pub d_epsilon: f64,
}

impl ParameterChain {
    /// A chain with `γ ≤ 0` is reported rather than rejected.
    pub fn is_valid(&self) -> bool {
        self.gamma > 0.0
    }

    /// `(a, b) = ((n−1)δ³γ/32, (n−1)δ³/(32β))`.
    pub fn bound_coefficients(&self) -> (f64, f64) {
        let nm1 = self.dim.nf() - 1.0;
        let d3 = self.delta.powi(3);
        (nm1 * d3 * self.gamma / 32.0, nm1 * d3 / (32.0 * self.beta))
    }

    /// `n/2 + a/(Λ⁶ + b)` with the chain's own coefficients.
    pub fn bound(&self) -> f64 {
        let (a, b) = self.bound_coefficients();
        self.dim.nf() / 2.0 + a / (self.lambda.powi(6) + b)
    }
}

pub fn build_parameter_chain(n: usize, lambda: f64, epsilon: f64, beta: f64) -> Result<ParameterChain> {
    let dim = DimensionContext::new(n)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Precondition(format!("Λ = {lambda} must be positive")));
    }
    if !(epsilon > 0.0 && epsilon <= lambda / 2.0) {
        return Err(Error::Precondition(format!(
            "ε = {epsilon} must lie in (0, Λ/2] = (0, {}]",
            lambda / 2.0
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Precondition(format!("β = {beta} must be positive")));
    }
    let nf = dim.nf();
    let l2 = lambda * lambda;
    let epsilon_tilde = offset_mean_curvature_bound_unchecked(nf, lambda, epsilon);
    let delta = nf * (epsilon / nf).atan();
    Ok(ParameterChain {
        dim,
        lambda,
        epsilon,
        beta,
        epsilon_tilde,
        gamma: (2.0 * nf).sqrt() - epsilon_tilde - beta,
        delta,
        t: delta / (2.0 * l2),
        d_epsilon: (epsilon / l2).atan(),
    })
}

/// Chain with `ε = √n/3` and `β = √n/20`.
pub fn default_parameter_chain(n: usize, lambda: f64) -> Result<ParameterChain> {
    let s = (n as f64).sqrt();
    build_parameter_chain(n, lambda, s / 3.0, s / 20.0)
}

pub(crate) fn offset_mean_curvature_bound_unchecked(n: f64, lambda: f64, epsilon: f64) -> f64 {
    lambda * epsilon / (lambda - epsilon) * (n / (lambda * lambda) + 1.0)
}

/// `I_Λ = ∫₀^{arctan(1/Λ)} cosⁿt (1 − Λ tan t)ⁿ dt`.
///
/// `Λ = 0` is accepted as the limit `∫₀^{π/2} cosⁿt dt`.
pub fn tube_integral(n: usize, lambda: f64) -> Result<f64> {
    tube_integral_with(n, lambda, QuadratureOptions::default())
}

pub fn tube_integral_with(n: usize, lambda: f64, opts: QuadratureOptions) -> Result<f64> {
    DimensionContext::new(n)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Precondition(format!("Λ = {lambda} must be nonnegative")));
    }
    let upper = if lambda == 0.0 {
        std::f64::consts::FRAC_PI_2
    } else {
        (1.0 / lambda).atan()
    };
    let k = n as i32;
    // cosⁿt (1 − Λ tan t)ⁿ = (cos t − Λ sin t)ⁿ, without the tan blow-up.
    integrate(|t: f64| (t.cos() - lambda * t.sin()).powi(k), 0.0, upper, opts).map(|r| r.value)
}

/// Crude floor `(5/54)(9/10)^{2n} / Λ` on `I_Λ`, valid for `Λ ≥ 1/4`.
pub fn tube_integral_floor(n: usize, lambda: f64) -> f64 {
    5.0 / 54.0 * 0.81f64.powi(n as i32) / lambda
}

/// `Γ(k/2)` for a positive integer `k`.
fn gamma_half_integer(k: usize) -> f64 {
    assert!(k > 0);
    let mut g = if k % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut m = if k % 2 == 0 { 2 } else { 1 };
    while m < k {
        g *= m as f64 / 2.0;
        m += 2;
    }
    g
}

/// Volume of the unit sphere `S^dim ⊂ R^{dim+1}`: `2π^{(dim+1)/2} / Γ((dim+1)/2)`.
pub fn sphere_volume(dim: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf((dim as f64 + 1.0) / 2.0) / gamma_half_integer(dim + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeBound {
    pub tube_integral: f64,
    /// `Vol(Sⁿ⁺¹) / (2 I_Λ)`.
    pub sharp: f64,
    /// `c_n Λ Vol(Sⁿ⁺¹)`, only for `Λ ≥ 1/4`.
    pub crude: Option<f64>,
}

/// Volume bound for closed embedded mean-convex hypersurfaces with `max ‖A‖ ≤ Λ`.
pub fn volume_upper_bound(n: usize, lambda: f64) -> Result<VolumeBound> {
    let tube = tube_integral(n, lambda)?;
    let vol = sphere_volume(n + 1);
    let sharp = vol / (2.0 * tube);
    let crude = (lambda >= 0.25).then(|| {
        let c_n = 25.0 / 3.0 * 1.25f64.powi(n as i32 - 2);
        c_n * lambda * vol
    });
    if let Some(crude) = crude {
        if sharp > crude {
            return Err(Error::Domain(format!(
                "sharp volume bound {sharp} exceeds the crude bound {crude} at Λ = {lambda}"
            )));
        }
    }
    Ok(VolumeBound {
        tube_integral: tube,
        sharp,
        crude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    // Taylor series after two half-angle reductions, summed smallest-first.
    fn atan_oracle(x: f64) -> f64 {
        let mut y = x;
        for _ in 0..2 {
            y /= 1.0 + (1.0 + y * y).sqrt();
        }
        let terms: Vec<f64> = (0..40)
            .map(|k| {
                let p = 2 * k + 1;
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                s * y.powi(p as i32) / p as f64
            })
            .collect();
        4.0 * terms.iter().rev().sum::<f64>()
    }

    #[test]
    fn platform_atan_matches_series_oracle() {
        for n in 2..200usize {
            let x = 1.0 / (3.0 * (n as f64).sqrt());
            assert!((x.atan() - atan_oracle(x)).abs() < 1e-15, "n = {n}");
        }
        for &x in &[0.1, 0.2357, 1.0, 4.0] {
            assert!((f64::atan(x) - atan_oracle(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn factor_at_n2_matches_high_precision_value() {
        // 40-digit reference evaluation.
        let f = arctan_cubed_factor(2).unwrap();
        assert!((f - 0.035_080_887_960_720_595).abs() < 1e-15);
        assert!((7.0 / 200.0..=1.0 / 27.0).contains(&f));
    }

    #[test]
    fn factor_approaches_one_27th() {
        let f = arctan_cubed_factor(1_000_000).unwrap();
        assert!(f < 1.0 / 27.0);
        assert!((f - 1.0 / 27.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_small_dimensions() {
        assert!(matches!(arctan_cubed_factor(1), Err(Error::Domain(_))));
        assert!(compute_bound_constants(0).is_err());
        assert!(eigenvalue_lower_bound(1, 2.0).is_err());
    }

    #[test]
    fn bound_constants_n2_and_n3() {
        let c = compute_bound_constants(2).unwrap();
        assert!((c.a_n - 1.315_533_298_527_022e-4).abs() < 1e-17);
        assert!((c.b_n - 0.087_702_219_901_801_49).abs() < 1e-15);
        assert!(c.a_n >= 1.25e-4);
        assert!(c.b_n <= 20.0 / 216.0);
        assert!((c.c_n - 25.0 / 3.0).abs() < 1e-15);

        let c3 = compute_bound_constants(3).unwrap();
        assert!((c3.a_n - 6.026_254_646_564_712e-4).abs() < 1e-16);
        assert!(c3.a_n >= 5.625e-4);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(eigenvalue_lower_bound(2, 0.0).unwrap(), 2.0);
        let b = eigenvalue_lower_bound(2, SQRT_2).unwrap();
        assert!((b - 1.000_016_265_847_366).abs() < 1e-14);
        let far = eigenvalue_lower_bound(2, 1e3).unwrap();
        // a_n/(Λ⁶ + b_n) ≈ 1.3e-22 is below the spacing of doubles near 1.
        assert_eq!(far, 1.0);
        assert_eq!(eigenvalue_lower_bound(3, 1.2).unwrap(), 3.0);
        // √2 rounded to eight places is still the Clifford value.
        let rounded = eigenvalue_lower_bound(2, 1.414_213_56).unwrap();
        assert!((rounded - 1.000_016_3).abs() < 1e-7);
        assert_eq!(eigenvalue_lower_bound(2, 1.4142).unwrap(), 2.0);
    }

    #[test]
    fn chain_at_clifford_parameters() {
        let ch = build_parameter_chain(2, SQRT_2, SQRT_2 / 3.0, SQRT_2 / 20.0).unwrap();
        assert!((ch.epsilon_tilde - SQRT_2).abs() < 1e-14);
        assert!((ch.gamma - 0.515_075_759_508_250_2).abs() < 1e-14);
        assert!(ch.gamma >= 3.0 * SQRT_2 / 100.0);
        assert!((ch.delta - 0.462_954_727_940_356_7).abs() < 1e-15);
        assert!((ch.t - ch.delta / 4.0).abs() < 1e-16);
        assert!((ch.d_epsilon - 0.231_477_363_970_178_36).abs() < 1e-15);
        assert!(ch.t < ch.d_epsilon);
        assert!(ch.is_valid());
    }

    #[test]
    fn chain_rejects_large_epsilon_and_flags_degenerate_gamma() {
        assert!(matches!(
            build_parameter_chain(2, 2.0, 1.01, 0.1),
            Err(Error::Precondition(_))
        ));
        let ch = build_parameter_chain(2, 2.0, 1.0, 5.0).unwrap();
        assert!(!ch.is_valid());
    }

    #[test]
    fn tube_integral_closed_forms() {
        let i1 = tube_integral(2, 1.0).unwrap();
        assert!((i1 - (FRAC_PI_4 - 0.5)).abs() < 1e-10);
        let i2 = tube_integral(2, SQRT_2).unwrap();
        // 3a/2 − sin(2a)/4 − √2(1 − cos 2a)/2 with tan a = 1/√2.
        let a = (1.0 / SQRT_2).atan();
        let closed = 1.5 * a - (2.0 * a).sin() / 4.0 - SQRT_2 * (1.0 - (2.0 * a).cos()) / 2.0;
        assert!((i2 - closed).abs() < 1e-10);
        assert!((i2 - 0.216_112_781_819_033_5).abs() < 1e-10);
    }

    #[test]
    fn tube_integral_floor_holds_on_grid() {
        for n in 2..=8 {
            let mut l = 0.25;
            while l <= 10.0 {
                let i = tube_integral(n, l).unwrap();
                assert!(i >= tube_integral_floor(n, l), "n={n} Λ={l}");
                l += 0.25;
            }
        }
    }

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn volume_bounds_n2() {
        let v = volume_upper_bound(2, SQRT_2).unwrap();
        assert!((v.sharp - 45.668_767_566_713_74).abs() < 1e-8);
        assert!(2.0 * PI * PI <= v.sharp);
        let q = volume_upper_bound(2, 0.25).unwrap();
        let crude = q.crude.unwrap();
        assert!(q.sharp <= crude);
        // Also below the tighter 20/3 constant.
        assert!(q.sharp <= 20.0 / 3.0 * 0.25 * 2.0 * PI * PI);
        assert!(volume_upper_bound(2, 0.2).unwrap().crude.is_none());
    }

    #[test]
    fn coefficient_identity() {
        let ch = default_parameter_chain(4, 3.0).unwrap();
        let (a, b) = ch.bound_coefficients();
        let n = 4.0;
        for l in [2.0f64, 3.0, 7.5] {
            let lhs = a / (l.powi(6) + b);
            let rhs = ch.gamma * ch.beta * (n - 1.0) * ch.delta.powi(3)
                / (32.0 * ch.beta * l.powi(6) + (n - 1.0) * ch.delta.powi(3));
            assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs());
        }
    }

    mod properties {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn bound_lies_strictly_between_half_n_and_n(n in 2usize..40, excess in 0.0f64..50.0) {
                let lambda = (n as f64).sqrt() + excess;
                let b = eigenvalue_lower_bound(n, lambda).unwrap();
                prop_assert!(b > n as f64 / 2.0 && b < n as f64);
            }

            #[test]
            fn bound_decreases_in_lambda(n in 2usize..40, x in 0.0f64..20.0, dx in 1e-3f64..5.0) {
                let l = (n as f64).sqrt() + x;
                prop_assert!(eigenvalue_lower_bound(n, l + dx).unwrap() <= eigenvalue_lower_bound(n, l).unwrap());
            }

            #[test]
            fn default_chain_keeps_gamma_positive(n in 2usize..200, excess in 0.0f64..100.0) {
                let lambda = (n as f64).sqrt() + excess;
                let ch = default_parameter_chain(n, lambda).unwrap();
                let s = (n as f64).sqrt();
                prop_assert!(ch.gamma >= 3.0 * s / 100.0, "γ = {} at n = {n}, Λ = {lambda}", ch.gamma);
                prop_assert!(ch.t <= ch.d_epsilon / 2.0);
                prop_assert!((ch.delta - n as f64 * (ch.epsilon / n as f64).atan()).abs() <= 1e-15 * ch.delta);
            }

            #[test]
            fn coefficient_identity_for_random_chains(
                n in 2usize..30,
                lambda in 1.0f64..20.0,
                eps_frac in 0.01f64..0.5,
                beta in 0.01f64..3.0,
                l in 0.1f64..30.0,
            ) {
                let ch = build_parameter_chain(n, lambda, eps_frac * lambda, beta).unwrap();
                let nm1 = n as f64 - 1.0;
                let (a, b) = ch.bound_coefficients();
                let d3 = ch.delta.powi(3);
                let lhs = a / (l.powi(6) + b);
                let rhs = ch.gamma * beta * nm1 * d3 / (32.0 * beta * l.powi(6) + nm1 * d3);
                prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(f64::MIN_POSITIVE));
            }

            #[test]
            fn factor_is_monotone(n in 2usize..1_000_000) {
                let f = arctan_cubed_factor(n).unwrap();
                prop_assert!(f <= arctan_cubed_factor(n + 1).unwrap());
                prop_assert!((7.0 / 200.0..=1.0 / 27.0).contains(&f));
            }

            #[test]
            fn sharp_volume_bound_below_crude(n in 2usize..12, lambda in 0.25f64..50.0) {
                let v = volume_upper_bound(n, lambda).unwrap();
                prop_assert!(v.sharp <= v.crude.unwrap());
                prop_assert!(v.tube_integral >= tube_integral_floor(n, lambda));
            }
        }
    }
}
