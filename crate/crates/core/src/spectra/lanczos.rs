//! Thick-restart Lanczos for the largest eigenvalue of a self-adjoint walk
//! operator on the mean-zero subspace.
//!
//! Every new Krylov vector is projected to mean zero and orthogonalized twice
//! against the whole basis (classical Gram-Schmidt, two passes), so the
//! projected matrix `T = V^T A V` is read off the orthogonalization
//! coefficients. On restart the `keep` largest Ritz vectors are retained and
//! the current residual direction is appended.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::dense::symmetric_eigen;
use super::operator::{dot, norm, remove_mean, WalkOperator};
use super::{Method, SpectraError, SpectralReport};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeConfig {
    /// Bound on `||Av - lambda v||` for unit `v`.
    pub tol: f64,
    /// Operator applications allowed.
    pub max_iter: usize,
    pub seed: u64,
    /// Maximum basis size per restart cycle.
    pub basis: usize,
    /// Ritz vectors kept across a restart.
    pub keep: usize,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        IterativeConfig {
            tol: 1e-8,
            max_iter: 20_000,
            seed: 0,
            basis: 32,
            keep: 12,
        }
    }
}

/// A spectral report together with the unit, mean-zero eigenvector estimate for lambda2.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub report: SpectralReport,
    pub vector: Vec<f64>,
}

const BREAKDOWN: f64 = 1e-12;

pub fn iterative_gap(op: &WalkOperator, config: &IterativeConfig) -> Result<SpectralReport, SpectraError> {
    iterative_eigenpair(op, config).map(|e| e.report)
}

pub fn iterative_eigenpair(op: &WalkOperator, config: &IterativeConfig) -> Result<Eigenpair, SpectraError> {
    if !op.is_self_adjoint() {
        return Err(SpectraError::NotSelfAdjoint);
    }
    let n = op.size();
    if n == 1 {
        return Ok(Eigenpair {
            report: SpectralReport::degenerate(op, Method::Iterative, Some(config.seed)),
            vector: vec![0.0],
        });
    }
    // The mean-zero subspace has dimension n - 1.
    let m = config.basis.max(2).min(n - 1);
    let keep = config.keep.max(1).min(m.saturating_sub(1));

    let mut rng = seeded_rng(config.seed);
    let mut start = vec![0.0; n];
    let mut start_norm = 0.0;
    while start_norm < 1e-8 {
        start.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
        remove_mean(&mut start);
        start_norm = norm(&start);
    }
    start.iter_mut().for_each(|x| *x /= start_norm);

    let mut basis: Vec<Vec<f64>> = vec![start];
    let mut t = vec![0.0; m * m];
    let mut w = vec![0.0; n];
    let mut coeffs = vec![0.0; m];
    let mut matvecs = 0usize;

    loop {
        // Expand until the basis is full or the Krylov space is exhausted.
        let beta = loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            remove_mean(&mut w);
            for pass in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    coeffs[i] = dot(v, &w);
                }
                for (i, v) in basis.iter().enumerate() {
                    let h = coeffs[i];
                    w.iter_mut().zip(v).for_each(|(wk, vk)| *wk -= h * vk);
                    if pass == 0 {
                        t[i * m + j] = h;
                    } else {
                        t[i * m + j] += h;
                    }
                }
            }
            for i in 0..j {
                t[j * m + i] = t[i * m + j];
            }
            let beta = norm(&w);
            if basis.len() == m || beta < BREAKDOWN || matvecs >= config.max_iter {
                break beta;
            }
            let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
            basis.push(next);
        };

        let s = basis.len();
        let mut small = vec![0.0; s * s];
        for i in 0..s {
            small[i * s..(i + 1) * s].copy_from_slice(&t[i * m..i * m + s]);
        }
        let eig = symmetric_eigen(&small, s, true);
        let ritz = eig.vectors.as_ref().expect("vectors requested");
        let top = s - 1;
        let estimate = beta * ritz[(s - 1) * s + top].abs();
        let exhausted = beta < BREAKDOWN;

        if estimate <= config.tol || exhausted || matvecs >= config.max_iter {
            let mut u = combine(&basis, ritz, s, top);
            remove_mean(&mut u);
            let un = norm(&u);
            u.iter_mut().for_each(|x| *x /= un);
            op.apply(&u, &mut w);
            matvecs += 1;
            let rayleigh = dot(&u, &w);
            let residual = libm::sqrt(
                w.iter()
                    .zip(&u)
                    .map(|(a, b)| (a - rayleigh * b) * (a - rayleigh * b))
                    .sum::<f64>(),
            );
            let converged = residual <= config.tol;
            if converged || matvecs >= config.max_iter {
                let report = SpectralReport::from_lambdas(
                    op,
                    rayleigh,
                    eig.values[0],
                    Method::Iterative,
                    matvecs,
                    residual,
                    Some(config.seed),
                    converged,
                );
                return Ok(Eigenpair { report, vector: u });
            }
            // The estimate was optimistic (orthogonality loss); restart from u.
            basis = vec![u];
            t.iter_mut().for_each(|x| *x = 0.0);
            continue;
        }

        if keep == 0 {
            return Err(SpectraError::BasisTooSmall);
        }
        let first = s - keep;
        let mut kept: Vec<Vec<f64>> = (first..s).map(|k| combine(&basis, ritz, s, k)).collect();
        t.iter_mut().for_each(|x| *x = 0.0);
        for (i, k) in (first..s).enumerate() {
            t[i * m + i] = eig.values[k];
        }
        kept.push(w.iter().map(|x| x / beta).collect());
        basis = kept;
    }
}

/// `sum_l basis[l] * y[l][k]` for the Ritz matrix `y` (`s x s`, row-major).
fn combine(basis: &[Vec<f64>], y: &[f64], s: usize, k: usize) -> Vec<f64> {
    let n = basis[0].len();
    let mut out = vec![0.0; n];
    for (l, v) in basis.iter().enumerate() {
        let c = y[l * s + k];
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    out
}
