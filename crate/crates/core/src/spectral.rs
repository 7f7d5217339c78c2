//! First non-zero eigenpair of `L x = λ M x` for a cotangent stiffness `L`
//! and lumped mass `M`.
//!
//! Block inverse iteration on the M-orthogonal complement of the constants:
//! each sweep solves `L y = M x` by Jacobi-preconditioned conjugate gradients,
//! re-orthonormalises the block and applies Rayleigh–Ritz.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::LaplacePair;
use crate::sparse::{dot, CsrMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Ritz values within this relative distance of `λ₁` form one cluster.
pub const CLUSTER_REL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub block_size: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            block_size: 8,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub lambda1: f64,
    /// M-normalised, M-orthogonal to constants.
    pub eigenvector: Vec<f64>,
    /// `‖Lx − λMx‖_{M⁻¹} / (λ‖x‖_M)`, the largest over the cluster.
    pub residual: f64,
    pub iterations: usize,
    /// Ritz values in the cluster around `λ₁`.
    pub cluster: Vec<f64>,
    /// All Ritz values of the final block, ascending.
    pub ritz_values: Vec<f64>,
}

impl EigenResult {
    pub fn multiplicity(&self) -> usize {
        self.cluster.len()
    }
}

/// [`smallest_nonzero_eig_with`] with the default block size and seed.
pub fn smallest_nonzero_eig(pair: &LaplacePair, tol: f64, max_iter: usize) -> Result<EigenResult> {
    smallest_nonzero_eig_with(
        pair,
        EigenOptions {
            tol,
            max_iter,
            ..EigenOptions::default()
        },
    )
}

struct Problem<'a> {
    l: &'a CsrMatrix,
    m: &'a [f64],
    total_mass: f64,
    inv_diag: Vec<f64>,
}

impl Problem<'_> {
    fn m_dot(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).zip(self.m).map(|((a, b), w)| a * b * w).sum()
    }

    fn deflate(&self, x: &mut [f64]) {
        let c = self.m_dot(x, &vec![1.0; x.len()]) / self.total_mass;
        x.iter_mut().for_each(|v| *v -= c);
    }

    /// Solves `L y = b` for `b ⊥ 1`, starting from `y`, to relative residual `eta`.
    fn cg(&self, b: &[f64], y: &mut [f64], eta: f64) {
        let n = b.len();
        let mut r = self.l.matvec(y);
        r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
        let target = eta * dot(b, b).sqrt();
        let mut z: Vec<f64> = r.iter().zip(&self.inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut q = vec![0.0; n];
        for _ in 0..10 * n + 100 {
            if dot(&r, &r).sqrt() <= target {
                break;
            }
            self.l.matvec_into(&p, &mut q);
            let pq = dot(&p, &q);
            if !(pq > 0.0) {
                break;
            }
            let alpha = rz / pq;
            for i in 0..n {
                y[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            for i in 0..n {
                z[i] = r[i] * self.inv_diag[i];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
    }

    /// Modified Gram–Schmidt in the M inner product, applied twice. Vectors
    /// that collapse are replaced by fresh random ones.
    fn orthonormalise(&self, block: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
        for k in 0..block.len() {
            let mut attempts = 0;
            loop {
                let start = self.m_dot(&block[k], &block[k]).sqrt();
                for _ in 0..2 {
                    self.deflate(&mut block[k]);
                    for j in 0..k {
                        let c = self.m_dot(&block[k], &block[j]);
                        let (head, tail) = block.split_at_mut(k);
                        tail[0].iter_mut().zip(&head[j]).for_each(|(v, u)| *v -= c * u);
                    }
                }
                let norm = self.m_dot(&block[k], &block[k]).sqrt();
                if norm > 1e-10 * start && norm > 0.0 {
                    block[k].iter_mut().for_each(|v| *v /= norm);
                    break;
                }
                attempts += 1;
                assert!(attempts < 100, "cannot extend the eigensolver block");
                block[k] = random_vector(rng, block[k].len());
            }
        }
    }

    fn residual(&self, x: &[f64], theta: f64) -> f64 {
        let lx = self.l.matvec(x);
        let r2: f64 = lx
            .iter()
            .zip(x)
            .zip(self.m)
            .map(|((a, xi), w)| {
                let r = a - theta * w * xi;
                r * r / w
            })
            .sum();
        r2.sqrt() / (theta.abs() * self.m_dot(x, x).sqrt())
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Smallest eigenvalue of `L x = λ M x` on the M-orthogonal complement of
/// the constants, with its eigenvector and multiplicity cluster.
pub fn smallest_nonzero_eig_with(pair: &LaplacePair, opts: EigenOptions) -> Result<EigenResult> {
    let n = pair.dim();
    if !(opts.tol >= 1e-12) {
        return Err(Error::Precondition(format!("eigensolver tolerance {} is below 1e-12", opts.tol)));
    }
    if n < 2 {
        return Err(Error::Precondition("need at least two vertices".into()));
    }
    let diag = pair.stiffness.diagonal();
    if let Some(i) = diag.iter().position(|d| !(*d > 0.0)) {
        return Err(Error::Precondition(format!("stiffness diagonal entry {i} is not positive")));
    }
    let prob = Problem {
        l: &pair.stiffness,
        m: &pair.mass,
        total_mass: pair.total_mass(),
        inv_diag: diag.iter().map(|d| 1.0 / d).collect(),
    };
    let k = opts.block_size.clamp(1, n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut block: Vec<Vec<f64>> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
    prob.orthonormalise(&mut block, &mut rng);
    let mut thetas: Vec<f64> = block
        .iter()
        .map(|x| dot(x, &prob.l.matvec(x)))
        .collect();
    let mut best: Option<EigenResult> = None;
    let mut eta = 1e-2;

    for iter in 1..=opts.max_iter {
        // Inverse iteration step, warm-started at x/θ.
        let mut next = Vec::with_capacity(k);
        for (x, &theta) in block.iter().zip(&thetas) {
            let b: Vec<f64> = x.iter().zip(prob.m).map(|(a, w)| a * w).collect();
            let mut y: Vec<f64> = x.iter().map(|a| a / theta.max(f64::MIN_POSITIVE)).collect();
            prob.cg(&b, &mut y, eta);
            next.push(y);
        }
        block = next;
        prob.orthonormalise(&mut block, &mut rng);

        // Rayleigh–Ritz on the M-orthonormal block.
        let lx: Vec<Vec<f64>> = block.iter().map(|x| prob.l.matvec(x)).collect();
        let a = DMatrix::from_fn(k, k, |i, j| 0.5 * (dot(&block[i], &lx[j]) + dot(&block[j], &lx[i])));
        let eig = SymmetricEigen::new(a);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut ritz = Vec::with_capacity(k);
        for &c in &order {
            let mut v = vec![0.0; n];
            for (j, x) in block.iter().enumerate() {
                let w = eig.eigenvectors[(j, c)];
                v.iter_mut().zip(x).for_each(|(vi, xi)| *vi += w * xi);
            }
            ritz.push(v);
        }
        block = ritz;
        thetas = order.iter().map(|&c| eig.eigenvalues[c]).collect();

        let lambda1 = thetas[0];
        let cluster_len = thetas
            .iter()
            .take_while(|t| (*t - lambda1).abs() <= CLUSTER_REL * lambda1.abs())
            .count();
        let residual = (0..cluster_len)
            .map(|i| prob.residual(&block[i], thetas[i]))
            .fold(0.0, f64::max);
        let current = EigenResult {
            lambda1,
            eigenvector: block[0].clone(),
            residual,
            iterations: iter,
            cluster: thetas[..cluster_len].to_vec(),
            ritz_values: thetas.clone(),
        };
        if residual <= opts.tol {
            return Ok(current);
        }
        if best.as_ref().map_or(true, |b| residual < b.residual) {
            best = Some(current);
        }
        eta = (1e-2 * residual).clamp(1e-3 * opts.tol, 1e-2);
    }
    let best = best.expect("at least one iteration runs");
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: best.residual,
        best: Box::new(best),
    })
}

/// `xᵀLx / xᵀMx` after M-orthogonal removal of the constant component.
pub fn rayleigh_quotient(x: &[f64], pair: &LaplacePair) -> Result<f64> {
    if x.len() != pair.dim() {
        return Err(Error::Domain(format!(
            "vector has {} entries for a {}-vertex operator",
            x.len(),
            pair.dim()
        )));
    }
    let m_norm = |v: &[f64]| v.iter().zip(&pair.mass).map(|(a, w)| a * a * w).sum::<f64>().sqrt();
    let before = m_norm(x);
    let c = x.iter().zip(&pair.mass).map(|(a, w)| a * w).sum::<f64>() / pair.total_mass();
    let y: Vec<f64> = x.iter().map(|a| a - c).collect();
    let after = m_norm(&y);
    if !(after > 1e-12 * before) {
        return Err(Error::Domain("vector has zero M-norm after removing constants".into()));
    }
    Ok(dot(&y, &pair.stiffness.matvec(&y)) / (after * after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{assemble_laplacian, gen_clifford_torus, gen_flat_torus, gen_geodesic_sphere};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn small_pair() -> LaplacePair {
        assemble_laplacian(&gen_clifford_torus(12, 16).unwrap()).unwrap()
    }

    #[test]
    fn clifford_first_eigenvalue() {
        let m = gen_clifford_torus(48, 48).unwrap();
        let pair = assemble_laplacian(&m).unwrap();
        let r = smallest_nonzero_eig(&pair, 1e-8, 10_000).unwrap();
        assert!((r.lambda1 - 2.0).abs() < 0.02, "{}", r.lambda1);
        assert_eq!(r.multiplicity(), 4);
        assert!(r.residual <= 1e-8);
        let c: f64 = r.eigenvector.iter().zip(&pair.mass).map(|(a, w)| a * w).sum();
        assert!(c.abs() <= 1e-10);
        let rq = rayleigh_quotient(&r.eigenvector, &pair).unwrap();
        assert!((rq - r.lambda1).abs() <= 1e-8 * r.lambda1);
    }

    #[test]
    fn analytic_mode_rayleigh_quotient() {
        let m = gen_clifford_torus(64, 64).unwrap();
        let pair = assemble_laplacian(&m).unwrap();
        let x: Vec<f64> = m.vertices().iter().map(|v| v[0]).collect();
        let rq = rayleigh_quotient(&x, &pair).unwrap();
        assert!((rq - 2.0).abs() < 0.04, "{rq}");
        assert!(matches!(rayleigh_quotient(&vec![3.0; pair.dim()], &pair), Err(Error::Domain(_))));
    }

    #[test]
    fn sphere_cluster_and_flat_torus() {
        let pair = assemble_laplacian(&gen_geodesic_sphere(FRAC_PI_2, 4).unwrap()).unwrap();
        let r = smallest_nonzero_eig(&pair, 1e-8, 10_000).unwrap();
        assert!((r.lambda1 - 2.0).abs() < 0.02);
        assert_eq!(r.multiplicity(), 3);
        let pair = assemble_laplacian(&gen_flat_torus(0.5, 48, 48).unwrap()).unwrap();
        let r = smallest_nonzero_eig(&pair, 1e-8, 10_000).unwrap();
        assert!((r.lambda1 - 4.0 / 3.0).abs() < 0.015 * 4.0 / 3.0, "{}", r.lambda1);
    }

    #[test]
    fn non_convergence_carries_best_iterate() {
        let pair = small_pair();
        match smallest_nonzero_eig(&pair, 1e-12, 1) {
            Err(Error::NoConvergence { iterations, best, .. }) => {
                assert_eq!(iterations, 1);
                assert!(best.lambda1 > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
        assert!(smallest_nonzero_eig(&pair, 1e-13, 10).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rayleigh_quotient_bounds_lambda1(seed in any::<u64>()) {
            let pair = small_pair();
            let r = smallest_nonzero_eig(&pair, 1e-10, 10_000).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_vector(&mut rng, pair.dim());
            let rq = rayleigh_quotient(&x, &pair).unwrap();
            prop_assert!(r.lambda1 <= rq * (1.0 + 1e-9));
        }

        #[test]
        fn scale_equivariance(c in 0.01f64..100.0) {
            let pair = small_pair();
            let base = smallest_nonzero_eig(&pair, 1e-10, 10_000).unwrap().lambda1;
            let both = smallest_nonzero_eig(&pair.scaled(c, c), 1e-10, 10_000).unwrap().lambda1;
            prop_assert!((both - base).abs() <= 1e-12 * base);
            let mass_only = smallest_nonzero_eig(&pair.scaled(1.0, c), 1e-10, 10_000).unwrap().lambda1;
            prop_assert!((mass_only * c - base).abs() <= 1e-9 * base);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let pair = small_pair();
        let a = smallest_nonzero_eig(&pair, 1e-9, 10_000).unwrap();
        let b = smallest_nonzero_eig(&pair, 1e-9, 10_000).unwrap();
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.lambda1.to_bits(), b.lambda1.to_bits());
    }
}
